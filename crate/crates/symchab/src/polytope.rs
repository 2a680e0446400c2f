//! Exact convex geometry over Q in ambient dimension <= 4.
//!
//! Everything here is driven by the mixed-volume needs of the intersection
//! bounds: canonical vertex sets, Minkowski sums, Euclidean volumes via a
//! triangulated boundary, mixed volumes by inclusion-exclusion over Minkowski
//! sums of subsets, the Ryser permanent, and the axis-simplex comparison
//! between `Per(A)/d!` and the true mixed volume.

use crate::linear::{feasible, Constraint};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Ambient dimension cap for the whole geometric layer.
pub const DIM_CAP: usize = 4;

/// Permanent computations are capped at this order.
pub const PERMANENT_CAP: usize = 12;

type Point = Vec<BigRational>;

/// A rational polytope stored by its canonical vertex set: extreme points
/// only, deduplicated, sorted lexicographically. The empty polytope and
/// single points are representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl Polytope {
    /// Convex hull of `points` in `R^dim`. The result's vertex list contains
    /// exactly the extreme points, canonically ordered.
    pub fn convex_hull(points: &[Point], dim: usize) -> Result<Self> {
        if dim == 0 || dim > DIM_CAP {
            return Err(Error::UnsupportedDimension { dim, cap: DIM_CAP });
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 1 {
            return Ok(Polytope { dim, vertices: pts });
        }
        let (rank, basis) = affine_rank(&pts);
        let vertex_indices = if rank == 0 {
            vec![0]
        } else if rank == dim {
            hull_vertex_indices(&pts, dim, &basis)
        } else {
            // Lower-dimensional: express the points in coordinates of the
            // affine span and take the hull there.
            let reduced = reduce_to_span(&pts, &basis, rank);
            let (_, rbasis) = affine_rank(&reduced);
            hull_vertex_indices(&reduced, rank, &rbasis)
        };
        let mut vertices: Vec<Point> = vertex_indices.into_iter().map(|i| pts[i].clone()).collect();
        vertices.sort();
        Ok(Polytope { dim, vertices })
    }

    /// A polytope from integer vertex coordinates; test and construction aid.
    pub fn from_int_points(points: &[Vec<i64>], dim: usize) -> Result<Self> {
        let pts: Vec<Point> = points
            .iter()
            .map(|p| p.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
            .collect();
        Self::convex_hull(&pts, dim)
    }

    /// The empty polytope in `R^dim`.
    pub fn empty(dim: usize) -> Self {
        Polytope { dim, vertices: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Canonical vertex list: extreme points, sorted.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Exact Euclidean volume in the ambient dimension; lower-dimensional
    /// polytopes (and the empty polytope) return 0.
    pub fn volume(&self) -> BigRational {
        if self.vertices.len() <= self.dim {
            return BigRational::zero();
        }
        let (rank, basis) = affine_rank(&self.vertices);
        if rank < self.dim {
            return BigRational::zero();
        }
        hull_volume(&self.vertices, self.dim, &basis)
    }

    /// Minkowski sum via the hull of pairwise vertex sums. The sum with an
    /// empty polytope is empty.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(self.dim));
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Polytope::convex_hull(&sums, self.dim)
    }
}

/// Mixed volume of `d` polytopes in `R^d`, normalised so that
/// `MV(Q, ..., Q) = d! vol(Q)`; equivalently the coefficient of
/// `l_1 * ... * l_d` in `vol(l_1 Q_1 + ... + l_d Q_d)`. Computed by
/// inclusion-exclusion over volumes of Minkowski sums of subsets.
pub fn mixed_volume(polys: &[Polytope]) -> Result<BigRational> {
    let d = polys.len();
    if d == 0 || d > DIM_CAP {
        return Err(Error::UnsupportedDimension { dim: d, cap: DIM_CAP });
    }
    for q in polys {
        if q.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: q.dim() });
        }
        if q.is_empty() {
            return Err(Error::ParameterRange("mixed volume requires nonempty polytopes"));
        }
    }
    let mut total = BigRational::zero();
    for mask in 1u32..(1 << d) {
        let mut sum: Option<Polytope> = None;
        for (i, q) in polys.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = Some(match sum {
                    None => q.clone(),
                    Some(acc) => acc.minkowski_sum(q)?,
                });
            }
        }
        let vol = sum.expect("mask is nonzero").volume();
        if (d - (mask.count_ones() as usize)).is_multiple_of(2) {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total)
}

/// A square rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    rows: Vec<Vec<BigRational>>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadMatrixShape);
        }
        Ok(SquareMatrix { n, rows })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }
}

/// Permanent by Ryser's inclusion-exclusion formula, exact, order <= 12.
pub fn permanent(m: &SquareMatrix) -> Result<BigRational> {
    let n = m.order();
    if n > PERMANENT_CAP {
        return Err(Error::PermanentTooLarge(n));
    }
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut total = BigRational::zero();
    for mask in 1u32..(1 << n) {
        let mut prod = BigRational::one();
        for i in 0..n {
            let mut rowsum = BigRational::zero();
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    rowsum += &m.rows[i][j];
                }
            }
            prod *= rowsum;
        }
        if (n - (mask.count_ones() as usize)).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// For a positive `d x d` matrix `A`, compare `Per(A)/d!` against the exact
/// mixed volume of the axis simplices `X_i = conv(0, a_i1 e_1, ..., a_id e_d)`.
/// Returns `(Per(A)/d!, MV(X_1, ..., X_d), equal)`. The two agree when the
/// rows are proportional but differ in general, so both are surfaced.
pub fn axis_simplex_mv(m: &SquareMatrix) -> Result<(BigRational, BigRational, bool)> {
    let d = m.order();
    if d == 0 || d > DIM_CAP {
        return Err(Error::UnsupportedDimension { dim: d, cap: DIM_CAP });
    }
    for row in m.rows() {
        for a in row {
            if !a.is_positive() {
                return Err(Error::NonPositiveEntry);
            }
        }
    }
    let mut simplices = Vec::with_capacity(d);
    for row in m.rows() {
        let mut pts: Vec<Point> = vec![vec![BigRational::zero(); d]];
        for (j, a) in row.iter().enumerate() {
            let mut p = vec![BigRational::zero(); d];
            p[j] = a.clone();
            pts.push(p);
        }
        simplices.push(Polytope::convex_hull(&pts, d)?);
    }
    let mv = mixed_volume(&simplices)?;
    let mut fact = BigRational::one();
    for i in 1..=d {
        fact *= BigRational::from_integer(BigInt::from(i as i64));
    }
    let per_scaled = permanent(m)? / fact;
    let agree = per_scaled == mv;
    Ok((per_scaled, mv, agree))
}

// ---------------------------------------------------------------------------
// Internal exact linear algebra and hull machinery.
// ---------------------------------------------------------------------------

/// Affine rank of a deduplicated point set together with indices
/// `[i_1, ..., i_r]` such that `p_{i_1} - p_0, ..., p_{i_r} - p_0` form a
/// basis of the span's direction space.
fn affine_rank(pts: &[Point]) -> (usize, Vec<usize>) {
    let mut pivots: Vec<Point> = Vec::new();
    let mut basis = Vec::new();
    if pts.len() <= 1 {
        return (0, basis);
    }
    let dim = pts[0].len();
    for i in 1..pts.len() {
        if pivots.len() == dim {
            break;
        }
        let mut v: Point = pts[i].iter().zip(&pts[0]).map(|(a, b)| a - b).collect();
        for piv in &pivots {
            let lead = piv.iter().position(|c| !c.is_zero()).expect("pivot is nonzero");
            if !v[lead].is_zero() {
                let factor = &v[lead] / &piv[lead];
                for (vc, pc) in v.iter_mut().zip(piv) {
                    *vc -= &factor * pc;
                }
            }
        }
        if v.iter().any(|c| !c.is_zero()) {
            pivots.push(v);
            basis.push(i);
        }
    }
    (basis.len(), basis)
}

/// Coordinates of every point in the affine span spanned by the basis
/// differences; used to run hulls of lower-dimensional point sets.
fn reduce_to_span(pts: &[Point], basis: &[usize], rank: usize) -> Vec<Point> {
    let dim = pts[0].len();
    // Columns of b_mat are the basis direction vectors.
    let b_mat: Vec<Point> = (0..dim)
        .map(|row| basis.iter().map(|&i| &pts[i][row] - &pts[0][row]).collect())
        .collect();
    // Pick `rank` independent rows of b_mat.
    let mut chosen_rows: Vec<usize> = Vec::new();
    let mut work: Vec<Point> = Vec::new();
    for (row, b_row) in b_mat.iter().enumerate() {
        if chosen_rows.len() == rank {
            break;
        }
        let mut v = b_row.clone();
        for (w, &_r) in work.iter().zip(&chosen_rows) {
            let lead = w.iter().position(|c| !c.is_zero()).expect("pivot is nonzero");
            if !v[lead].is_zero() {
                let factor = &v[lead] / &w[lead];
                for (vc, wc) in v.iter_mut().zip(w) {
                    *vc -= &factor * wc;
                }
            }
        }
        if v.iter().any(|c| !c.is_zero()) {
            work.push(v);
            chosen_rows.push(row);
        }
    }
    debug_assert_eq!(chosen_rows.len(), rank);
    // Invert the square submatrix on the chosen rows.
    let square: Vec<Point> = chosen_rows.iter().map(|&r| b_mat[r].clone()).collect();
    let inv = invert(&square);
    pts.iter()
        .map(|p| {
            let rhs: Point = chosen_rows.iter().map(|&r| &p[r] - &pts[0][r]).collect();
            mat_vec(&inv, &rhs)
        })
        .collect()
}

fn mat_vec(m: &[Point], v: &Point) -> Point {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Gauss-Jordan inverse of a small nonsingular rational matrix.
fn invert(m: &[Point]) -> Vec<Point> {
    let n = m.len();
    let mut a: Vec<Point> = m.to_vec();
    let mut inv: Vec<Point> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("matrix is nonsingular");
        a.swap(col, piv);
        inv.swap(col, piv);
        let lead = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &lead;
            inv[col][j] /= &lead;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    inv
}

/// Determinant of a small rational matrix by fraction-free-ish Gauss.
fn det(m: &[Point]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Point> = m.to_vec();
    let mut sign = BigRational::one();
    let mut prod = BigRational::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != col {
            a.swap(col, piv);
            sign = -sign;
        }
        let lead = a[col][col].clone();
        prod *= &lead;
        let pivot_tail = a[col][col..].to_vec();
        for row in a.iter_mut().skip(col + 1) {
            if !row[col].is_zero() {
                let f = &row[col] / &lead;
                for (rc, pc) in row[col..].iter_mut().zip(&pivot_tail) {
                    let t = &f * pc;
                    *rc -= t;
                }
            }
        }
    }
    sign * prod
}

/// Indices of the extreme points of a full-dimensional point set.
fn hull_vertex_indices(pts: &[Point], dim: usize, basis: &[usize]) -> Vec<usize> {
    match dim {
        1 => {
            let min = (0..pts.len()).min_by(|&a, &b| pts[a].cmp(&pts[b])).expect("nonempty");
            let max = (0..pts.len()).max_by(|&a, &b| pts[a].cmp(&pts[b])).expect("nonempty");
            vec![min, max]
        }
        2 => monotone_chain(pts),
        _ => {
            let boundary = incremental_hull(pts, dim, basis).boundary_point_indices();
            filter_extreme(pts, &boundary, dim)
        }
    }
}

/// Volume of a full-dimensional point set's hull.
fn hull_volume(pts: &[Point], dim: usize, basis: &[usize]) -> BigRational {
    match dim {
        1 => {
            let min = pts.iter().map(|p| &p[0]).min().expect("nonempty");
            let max = pts.iter().map(|p| &p[0]).max().expect("nonempty");
            max - min
        }
        2 => {
            let cycle = monotone_chain_cycle(pts);
            let mut twice = BigRational::zero();
            for i in 0..cycle.len() {
                let a = &pts[cycle[i]];
                let b = &pts[cycle[(i + 1) % cycle.len()]];
                twice += &a[0] * &b[1] - &a[1] * &b[0];
            }
            twice.abs() / BigRational::from_integer(BigInt::from(2))
        }
        _ => {
            let hull = incremental_hull(pts, dim, basis);
            let mut fact = BigRational::one();
            for i in 1..=dim {
                fact *= BigRational::from_integer(BigInt::from(i as i64));
            }
            let mut total = BigRational::zero();
            for facet in &hull.facets {
                let rows: Vec<Point> = facet
                    .verts
                    .iter()
                    .map(|&v| pts[v].iter().zip(&hull.interior).map(|(a, b)| a - b).collect())
                    .collect();
                total += det(&rows).abs();
            }
            total / fact
        }
    }
}

/// Extreme-point indices of a 2D point set (deduplicated input), by the
/// monotone chain with strict turns so collinear interior points drop out.
fn monotone_chain(pts: &[Point]) -> Vec<usize> {
    monotone_chain_cycle(pts)
}

/// The hull cycle in counterclockwise order (indices into `pts`).
fn monotone_chain_cycle(pts: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    let cross = |o: usize, a: usize, b: usize| -> BigRational {
        (&pts[a][0] - &pts[o][0]) * (&pts[b][1] - &pts[o][1])
            - (&pts[a][1] - &pts[o][1]) * (&pts[b][0] - &pts[o][0])
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !cross(lower[lower.len() - 2], lower[lower.len() - 1], i).is_positive() {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !cross(upper[upper.len() - 2], upper[upper.len() - 1], i).is_positive() {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

struct Facet {
    verts: Vec<usize>,
    normal: Point,
    offset: BigRational,
}

struct Hull {
    facets: Vec<Facet>,
    interior: Point,
}

impl Hull {
    fn boundary_point_indices(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Beneath-beyond incremental hull for full-dimensional sets in R^3 / R^4.
/// The boundary it produces is a simplicial complex whose union is the hull
/// boundary; coplanar insertions yield coplanar simplicial pieces, which is
/// fine for volume and for collecting boundary points.
fn incremental_hull(pts: &[Point], dim: usize, basis: &[usize]) -> Hull {
    let mut simplex: Vec<usize> = vec![0];
    simplex.extend_from_slice(&basis[..dim]);
    let nq = BigRational::from_integer(BigInt::from((dim + 1) as i64));
    let interior: Point = (0..dim)
        .map(|c| simplex.iter().map(|&i| pts[i][c].clone()).sum::<BigRational>() / &nq)
        .collect();

    let mut facets: Vec<Facet> = Vec::new();
    for skip in 0..simplex.len() {
        let verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &v)| v)
            .collect();
        facets.push(make_facet(pts, verts, &interior));
    }

    let in_simplex: Vec<bool> = {
        let mut flags = vec![false; pts.len()];
        for &i in &simplex {
            flags[i] = true;
        }
        flags
    };
    for p in 0..pts.len() {
        if in_simplex[p] {
            continue;
        }
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&f| {
                let val: BigRational = facets[f].normal.iter().zip(&pts[p]).map(|(a, b)| a * b).sum();
                val > facets[f].offset
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let vis_set: Vec<bool> = {
            let mut flags = vec![false; facets.len()];
            for &f in &visible {
                flags[f] = true;
            }
            flags
        };
        // Ridges shared by exactly one visible facet form the horizon.
        let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for (fi, facet) in facets.iter().enumerate() {
            for skip in 0..facet.verts.len() {
                let mut ridge: Vec<usize> = facet
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                ridge.sort_unstable();
                let entry = ridge_map.entry(ridge).or_insert((0, 0));
                entry.0 += 1;
                if vis_set[fi] {
                    entry.1 += 1;
                }
            }
        }
        let mut new_facets: Vec<Facet> = Vec::new();
        for (ridge, (total, vis)) in &ridge_map {
            debug_assert_eq!(*total, 2, "boundary complex must be closed");
            if *vis == 1 {
                let mut verts = ridge.clone();
                verts.push(p);
                new_facets.push(make_facet(pts, verts, &interior));
            }
        }
        let mut kept: Vec<Facet> = Vec::new();
        for (fi, facet) in facets.into_iter().enumerate() {
            if !vis_set[fi] {
                kept.push(facet);
            }
        }
        kept.extend(new_facets);
        facets = kept;
    }
    Hull { facets, interior }
}

/// Build an oriented facet through the given affinely independent vertices.
fn make_facet(pts: &[Point], verts: Vec<usize>, interior: &Point) -> Facet {
    let dim = pts[0].len();
    // Solve normal . (q_i - q_0) = 0; the solution space is one-dimensional.
    let rows: Vec<Point> = verts[1..]
        .iter()
        .map(|&v| pts[v].iter().zip(&pts[verts[0]]).map(|(a, b)| a - b).collect())
        .collect();
    let normal = nullspace_vector(&rows, dim);
    let offset: BigRational = normal.iter().zip(&pts[verts[0]]).map(|(a, b)| a * b).sum();
    let at_interior: BigRational = normal.iter().zip(interior).map(|(a, b)| a * b).sum();
    debug_assert!(at_interior != offset, "facet hyperplane passes through the interior point");
    if at_interior > offset {
        Facet {
            verts,
            normal: normal.into_iter().map(|c| -c).collect(),
            offset: -offset,
        }
    } else {
        Facet { verts, normal, offset }
    }
}

/// A nonzero solution of the homogeneous system `rows . x = 0` with
/// `rows.len() == dim - 1` independent rows.
fn nullspace_vector(rows: &[Point], dim: usize) -> Point {
    let mut a: Vec<Point> = rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..dim {
        let piv = (r..a.len()).find(|&i| !a[i][col].is_zero());
        if let Some(p) = piv {
            a.swap(r, p);
            let lead = a[r][col].clone();
            for c in a[r].iter_mut() {
                *c /= &lead;
            }
            let pivot_row = a[r].clone();
            for (i, other) in a.iter_mut().enumerate() {
                if i != r && !other[col].is_zero() {
                    let f = other[col].clone();
                    for (oc, pc) in other.iter_mut().zip(&pivot_row) {
                        let t = &f * pc;
                        *oc -= t;
                    }
                }
            }
            pivot_cols.push(col);
            r += 1;
        }
    }
    debug_assert_eq!(r, dim - 1, "facet vertices must be affinely independent");
    let free_col = (0..dim).find(|c| !pivot_cols.contains(c)).expect("one free column");
    let mut x = vec![BigRational::zero(); dim];
    x[free_col] = BigRational::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -a[row][free_col].clone();
    }
    x
}

/// Filter candidate boundary points down to true extreme points with an exact
/// separation feasibility test.
fn filter_extreme(pts: &[Point], candidates: &[usize], dim: usize) -> Vec<usize> {
    candidates
        .iter()
        .copied()
        .filter(|&v| {
            let cs: Vec<Constraint> = candidates
                .iter()
                .filter(|&&u| u != v)
                .map(|&u| {
                    let coeffs: Point = pts[v].iter().zip(&pts[u]).map(|(a, b)| a - b).collect();
                    Constraint::ge(coeffs, -BigRational::one())
                })
                .collect();
            feasible(dim, &cs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn hull(points: &[Vec<i64>], dim: usize) -> Polytope {
        Polytope::from_int_points(points, dim).unwrap()
    }

    #[test]
    fn square_hull_drops_interior_and_edge_points() {
        let p = hull(
            &[
                vec![0, 0],
                vec![2, 0],
                vec![0, 2],
                vec![2, 2],
                vec![1, 1],
                vec![1, 0],
                vec![0, 1],
            ],
            2,
        );
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), q(4));
    }

    #[test]
    fn collinear_points_keep_endpoints_only() {
        let p = hull(&[vec![0, 0], vec![1, 1], vec![3, 3], vec![2, 2]], 2);
        let verts: Vec<Vec<BigRational>> = vec![vec![q(0), q(0)], vec![q(3), q(3)]];
        assert_eq!(p.vertices(), &verts[..]);
        assert_eq!(p.volume(), q(0));
    }

    #[test]
    fn single_point_and_empty() {
        let p = hull(&[vec![5, 7]], 2);
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.volume(), q(0));
        let e = Polytope::empty(3);
        assert!(e.is_empty());
        assert_eq!(e.volume(), q(0));
    }

    #[test]
    fn cube_hull_and_volume() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        // Face centers and the body center are not vertices.
        pts.push(vec![1, 1, 1]);
        let p = hull(&pts, 3);
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.volume(), q(1));
    }

    #[test]
    fn simplex_volumes_in_three_and_four_dimensions() {
        let s3 = hull(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3);
        assert_eq!(s3.volume(), qr(1, 6));
        let s4 = hull(
            &[
                vec![0, 0, 0, 0],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
            4,
        );
        assert_eq!(s4.volume(), qr(1, 24));
        let mut cube4 = Vec::new();
        for m in 0..16u32 {
            cube4.push((0..4).map(|b| ((m >> b) & 1) as i64).collect());
        }
        let c4 = hull(&cube4, 4);
        assert_eq!(c4.vertices().len(), 16);
        assert_eq!(c4.volume(), q(1));
    }

    #[test]
    fn minkowski_sum_of_segments_is_a_square() {
        let sx = hull(&[vec![0, 0], vec![1, 0]], 2);
        let sy = hull(&[vec![0, 0], vec![0, 1]], 2);
        let sq = sx.minkowski_sum(&sy).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.volume(), q(1));
    }

    #[test]
    fn mixed_volume_of_unit_segments_is_one() {
        let sx = hull(&[vec![0, 0], vec![1, 0]], 2);
        let sy = hull(&[vec![0, 0], vec![0, 1]], 2);
        assert_eq!(mixed_volume(&[sx, sy]).unwrap(), q(1));
    }

    #[test]
    fn mixed_volume_of_standard_triangles_is_one() {
        let t = hull(&[vec![0, 0], vec![1, 0], vec![0, 1]], 2);
        assert_eq!(mixed_volume(&[t.clone(), t]).unwrap(), q(1));
    }

    #[test]
    fn mixed_volume_quadrilateral_example() {
        let a = hull(&[vec![0, 0], vec![2, 0], vec![0, 1]], 2);
        let b = hull(&[vec![0, 0], vec![1, 0], vec![0, 2]], 2);
        assert_eq!(mixed_volume(&[a, b]).unwrap(), q(4));
    }

    #[test]
    fn repeated_body_gives_factorial_times_volume() {
        let t = hull(&[vec![0, 0], vec![3, 1], vec![1, 2]], 2);
        let v = t.volume();
        assert_eq!(mixed_volume(&[t.clone(), t]).unwrap(), q(2) * v);
        let s = hull(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3);
        assert_eq!(
            mixed_volume(&[s.clone(), s.clone(), s.clone()]).unwrap(),
            q(6) * s.volume()
        );
    }

    #[test]
    fn permanent_small_cases() {
        let ones2 = SquareMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(permanent(&ones2).unwrap(), q(2));
        let eights = SquareMatrix::from_int_rows(&[vec![8, 8], vec![8, 8]]).unwrap();
        assert_eq!(permanent(&eights).unwrap(), q(128));
        let ones3 = SquareMatrix::from_int_rows(&vec![vec![1i64; 3]; 3]).unwrap();
        assert_eq!(permanent(&ones3).unwrap(), q(6));
        let m = SquareMatrix::from_int_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(permanent(&m).unwrap(), q(10));
        let single = SquareMatrix::from_int_rows(&[vec![7]]).unwrap();
        assert_eq!(permanent(&single).unwrap(), q(7));
    }

    #[test]
    fn permanent_order_cap() {
        let big = SquareMatrix::from_int_rows(&vec![vec![1i64; 13]; 13]).unwrap();
        assert!(matches!(permanent(&big), Err(Error::PermanentTooLarge(13))));
    }

    #[test]
    fn axis_simplex_counterexample_and_homothetic_case() {
        let m = SquareMatrix::from_int_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let (per_scaled, mv, agree) = axis_simplex_mv(&m).unwrap();
        assert_eq!(per_scaled, qr(5, 2));
        assert_eq!(mv, q(4));
        assert!(!agree);

        let h = SquareMatrix::from_int_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
        let (per_scaled, mv, agree) = axis_simplex_mv(&h).unwrap();
        assert_eq!(per_scaled, q(2));
        assert_eq!(mv, q(2));
        assert!(agree);
    }

    #[test]
    fn axis_simplex_all_ones_in_dimension_four() {
        let m = SquareMatrix::from_int_rows(&vec![vec![1i64; 4]; 4]).unwrap();
        let (per_scaled, mv, agree) = axis_simplex_mv(&m).unwrap();
        assert_eq!(per_scaled, q(1));
        assert_eq!(mv, q(1));
        assert!(agree);
    }

    #[test]
    fn axis_simplex_rejects_nonpositive_entries() {
        let m = SquareMatrix::from_int_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert!(matches!(axis_simplex_mv(&m), Err(Error::NonPositiveEntry)));
    }

    #[test]
    fn rational_coordinates_are_exact() {
        let p = Polytope::convex_hull(
            &[
                vec![qr(1, 3), qr(1, 7)],
                vec![qr(22, 7), qr(1, 7)],
                vec![qr(1, 3), qr(15, 7)],
            ],
            2,
        )
        .unwrap();
        // Right triangle with legs 22/7 - 1/3 = 59/21 and 2.
        assert_eq!(p.volume(), qr(59, 21));
    }
}
