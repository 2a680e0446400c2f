//! Arithmetic pipeline: truncation depths, point counts over small finite
//! fields, residue-disk profiles, disk matrices and the final bound report.

use crate::gf::{self, FqCtx};
use crate::polytope::{permanent, SquareMatrix};
use crate::{is_prime, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Truncation depth `delta(k, p, l)`: the largest `N >= 0` with
/// `v_p(k + N) >= N / l + v_p(k)`, the limiting value of the depth function as
/// its epsilon parameter shrinks to zero (the inequality stays non-strict in
/// the limit; this is the unique reading that reproduces all four published
/// table values for p = 2, l = 2).
///
/// Termination: any `N` satisfying the test obeys
/// `p^(N/l) <= (k + N) / p^(v_p(k)) <= k + N`, so `N <= l * (bits(k) + 64)`
/// caps every passer with room to spare; the scan is exhaustive below the cap.
pub fn delta(k: u64, p: u64, l: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::ParameterRange("delta requires k >= 1"));
    }
    if l == 0 {
        return Err(Error::ParameterRange("delta requires l >= 1"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let vp = |mut n: u64| -> u64 {
        let mut v = 0;
        while n.is_multiple_of(p) {
            n /= p;
            v += 1;
        }
        v
    };
    let vk = vp(k);
    let cap = (l as u64) * (64 - k.leading_zeros() as u64 + 64);
    if k.checked_add(cap).is_none() {
        return Err(Error::ParameterRange("k too large for the depth scan"));
    }
    let mut best = 0u64;
    for n in 0..=cap {
        // v_p(k+n) >= n/l + v_p(k), compared without division.
        if (vp(k + n) as u128) * (l as u128) >= (n as u128) + (vk as u128) * (l as u128) {
            best = n;
        }
    }
    Ok(best)
}

/// Hyperelliptic model `y^2 + g(x) y = h(x)` with `h` monic of odd degree
/// `2*genus + 1`, carried together with the working prime and the assumption
/// flags that are echoed into bound reports. Coefficients are integers,
/// low-to-high.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    genus: u32,
    p: u64,
    h: Vec<i64>,
    g: Vec<i64>,
    rank_assumption: u32,
    assumption_a: bool,
}

impl CurveSpec {
    pub fn new(
        genus: u32,
        p: u64,
        h: Vec<i64>,
        g: Vec<i64>,
        rank_assumption: u32,
        assumption_a: bool,
    ) -> Result<CurveSpec> {
        if genus == 0 || genus > gf::DEGREE_CAP {
            return Err(Error::BadCurveModel("genus must be between 1 and 12"));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h.len() != 2 * genus as usize + 2 || *h.last().unwrap() != 1 {
            return Err(Error::BadCurveModel("h must be monic of degree exactly 2*genus + 1"));
        }
        if g.len() > genus as usize + 1 {
            return Err(Error::BadCurveModel("g may have degree at most the genus"));
        }
        Ok(CurveSpec { genus, p, h, g, rank_assumption, assumption_a })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> &[i64] {
        &self.h
    }

    pub fn g(&self) -> &[i64] {
        &self.g
    }

    pub fn rank_assumption(&self) -> u32 {
        self.rank_assumption
    }

    pub fn assumption_a(&self) -> bool {
        self.assumption_a
    }

    fn h_mod_p(&self) -> Vec<u64> {
        gf::fp_reduce(&self.h, self.p)
    }

    fn g_mod_p(&self) -> Vec<u64> {
        gf::fp_reduce(&self.g, self.p)
    }
}

/// Whether the reduction mod p of the model is smooth. For odd p the affine
/// model completes to `y^2 = f(x)` with `f = h + g^2/4`, smooth exactly when
/// `f` mod p is squarefree (`h` is monic of odd degree, so the degree never
/// drops and the point at infinity is smooth). In characteristic 2 the
/// y-partial is `g(x)`, so singular points can only sit over roots of `g`
/// mod 2; each such root in an extension of degree up to `deg g` is checked
/// against the x-partial, and `g = 0` mod 2 is always singular.
pub fn good_reduction(curve: &CurveSpec) -> bool {
    let p = curve.p;
    let hbar = curve.h_mod_p();
    let gbar = curve.g_mod_p();
    if p == 2 {
        if gbar.is_empty() {
            return false;
        }
        let gd = gf::fp_deriv(&gbar, 2);
        let hd = gf::fp_deriv(&hbar, 2);
        let deg_g = gbar.len() - 1;
        for e in 1..=deg_g {
            let ctx = FqCtx::new(2, e as u32).expect("degree bounded by the genus cap");
            for x in ctx.elements() {
                if !ctx.is_zero(&ctx.eval_fp_poly(&gbar, &x)) {
                    continue;
                }
                let y = ctx.sqrt2(&ctx.eval_fp_poly(&hbar, &x));
                let gdx = ctx.eval_fp_poly(&gd, &x);
                let hdx = ctx.eval_fp_poly(&hd, &x);
                if ctx.is_zero(&ctx.add(&ctx.mul(&gdx, &y), &hdx)) {
                    return false;
                }
            }
        }
        true
    } else {
        let inv4 = gf::scalar_inv(4 % p, p);
        let fbar = gf::fp_add(&hbar, &gf::fp_scale(&gf::fp_mul(&gbar, &gbar, p), inv4, p), p);
        gf::fp_gcd(&fbar, &gf::fp_deriv(&fbar, p), p).len() == 1
    }
}

fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = 1u128 << ((128 - n.leading_zeros()).div_ceil(2));
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `#X(F_{p^e})` by brute force over the field, including the single point at
/// infinity of the odd model. Requires good reduction and `e <= 12`.
pub fn count_points(curve: &CurveSpec, e: u32) -> Result<u64> {
    if !good_reduction(curve) {
        return Err(Error::BadReduction);
    }
    let ctx = FqCtx::new(curve.p, e)?;
    let hbar = curve.h_mod_p();
    let gbar = curve.g_mod_p();
    let q = ctx.order();
    let mut count = 1u64;
    if curve.p == 2 {
        for x in ctx.elements() {
            let a = ctx.eval_fp_poly(&gbar, &x);
            let b = ctx.eval_fp_poly(&hbar, &x);
            if ctx.is_zero(&a) {
                count += 1;
            } else {
                // y = a z turns y^2 + a y = b into z^2 + z = b/a^2, solvable
                // exactly when the absolute trace of the right side vanishes.
                let c = ctx.mul(&b, &ctx.pow(&ctx.inv(&a)?, 2));
                if ctx.trace_to_prime(&c) == 0 {
                    count += 2;
                }
            }
        }
    } else {
        let inv4 = ctx.scalar(gf::scalar_inv(4 % curve.p, curve.p));
        for x in ctx.elements() {
            let gx = ctx.eval_fp_poly(&gbar, &x);
            let hx = ctx.eval_fp_poly(&hbar, &x);
            // Complete the square: (y + g/2)^2 = h + g^2/4.
            let c = ctx.add(&hx, &ctx.mul(&ctx.mul(&gx, &gx), &inv4));
            if ctx.is_zero(&c) {
                count += 1;
            } else if ctx.pow(&c, (q - 1) / 2) == ctx.one() {
                count += 2;
            }
        }
    }
    let hw_cap = 1 + q as u128 + isqrt_u128(4 * (curve.genus as u128).pow(2) * q as u128);
    assert!((count as u128) <= hw_cap, "point count violates the Weil bound");
    Ok(count)
}

/// Coefficients, low-to-high, of the monic irreducible defining the canonical
/// copy of F_{p^e} that all point encodings refer to.
pub fn field_modulus(p: u64, e: u32) -> Result<Vec<u64>> {
    Ok(FqCtx::new(p, e)?.modulus().to_vec())
}

/// Coordinates of a closed point's canonical representative, encoded as
/// base-p integers over the canonical field of the point's degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointCoords {
    Infinity,
    Affine { x: u64, y: u64 },
}

/// A closed point of the reduced curve: a Frobenius orbit of geometric
/// points, stored by the representative with the least (x, y) encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClosedPoint {
    degree: u32,
    coords: PointCoords,
}

impl ClosedPoint {
    pub fn infinity() -> ClosedPoint {
        ClosedPoint { degree: 1, coords: PointCoords::Infinity }
    }

    pub fn affine(degree: u32, x: u64, y: u64) -> ClosedPoint {
        ClosedPoint { degree, coords: PointCoords::Affine { x, y } }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> &PointCoords {
        &self.coords
    }

    /// Canonical text form: `d1:inf` or `d2:x1y2`.
    pub fn part_key(&self) -> String {
        match &self.coords {
            PointCoords::Infinity => format!("d{}:inf", self.degree),
            PointCoords::Affine { x, y } => format!("d{}:x{}y{}", self.degree, x, y),
        }
    }
}

/// Closed points of degree up to `max_degree`, sorted canonically, together
/// with the counts `a_e` of points of each exact degree `e`. The counts are
/// cross-checked against the Moebius inversion of the field point counts.
pub fn closed_points(curve: &CurveSpec, max_degree: u32) -> Result<(Vec<ClosedPoint>, Vec<u64>)> {
    if max_degree == 0 {
        return Err(Error::ParameterRange("closed points need max_degree >= 1"));
    }
    if !good_reduction(curve) {
        return Err(Error::BadReduction);
    }
    let p = curve.p;
    let hbar = curve.h_mod_p();
    let gbar = curve.g_mod_p();
    let mut points = vec![ClosedPoint::infinity()];
    let mut counts = vec![0u64; max_degree as usize];
    counts[0] = 1;
    for e in 1..=max_degree {
        let ctx = FqCtx::new(p, e)?;
        let mut affine: Vec<(u64, u64)> = Vec::new();
        if p == 2 {
            // Roots of z^2 + z = c, keyed by the encoding of c.
            let mut artin: BTreeMap<u64, Vec<Vec<u64>>> = BTreeMap::new();
            for z in ctx.elements() {
                let c = ctx.add(&ctx.mul(&z, &z), &z);
                artin.entry(ctx.encode(&c)).or_default().push(z);
            }
            for x in ctx.elements() {
                let a = ctx.eval_fp_poly(&gbar, &x);
                let b = ctx.eval_fp_poly(&hbar, &x);
                if ctx.is_zero(&a) {
                    let y = ctx.sqrt2(&b);
                    affine.push((ctx.encode(&x), ctx.encode(&y)));
                } else {
                    let c = ctx.mul(&b, &ctx.pow(&ctx.inv(&a)?, 2));
                    if let Some(roots) = artin.get(&ctx.encode(&c)) {
                        for z in roots {
                            let y = ctx.mul(&a, z);
                            affine.push((ctx.encode(&x), ctx.encode(&y)));
                        }
                    }
                }
            }
        } else {
            // Square roots, keyed by the encoding of the square.
            let mut sqrts: BTreeMap<u64, Vec<Vec<u64>>> = BTreeMap::new();
            for u in ctx.elements() {
                sqrts.entry(ctx.encode(&ctx.mul(&u, &u))).or_default().push(u);
            }
            let inv4 = ctx.scalar(gf::scalar_inv(4 % p, p));
            let inv2 = ctx.scalar(gf::scalar_inv(2 % p, p));
            for x in ctx.elements() {
                let gx = ctx.eval_fp_poly(&gbar, &x);
                let hx = ctx.eval_fp_poly(&hbar, &x);
                let c = ctx.add(&hx, &ctx.mul(&ctx.mul(&gx, &gx), &inv4));
                if let Some(roots) = sqrts.get(&ctx.encode(&c)) {
                    for w in roots {
                        let y = ctx.sub(w, &ctx.mul(&gx, &inv2));
                        affine.push((ctx.encode(&x), ctx.encode(&y)));
                    }
                }
            }
        }
        affine.sort_unstable();
        assert_eq!(
            affine.len() as u64 + 1,
            count_points(curve, e)?,
            "point enumeration disagrees with the count"
        );
        let mut visited: BTreeSet<(u64, u64)> = BTreeSet::new();
        for &(xc, yc) in &affine {
            if visited.contains(&(xc, yc)) {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = (ctx.decode(xc), ctx.decode(yc));
            loop {
                let code = (ctx.encode(&cur.0), ctx.encode(&cur.1));
                if orbit.contains(&code) {
                    break;
                }
                orbit.push(code);
                cur = (ctx.frobenius(&cur.0), ctx.frobenius(&cur.1));
            }
            visited.extend(orbit.iter().copied());
            if orbit.len() == e as usize {
                let rep = orbit.iter().min().unwrap();
                points.push(ClosedPoint::affine(e, rep.0, rep.1));
                counts[e as usize - 1] += 1;
            }
        }
    }
    points.sort();
    // a_e = (1/e) sum over m | e of mu(e/m) #X(F_{p^m}).
    for e in 1..=max_degree {
        let mut rhs: i128 = 0;
        for m in 1..=e {
            if e % m == 0 {
                rhs += moebius(e / m) as i128 * count_points(curve, m)? as i128;
            }
        }
        assert!(rhs >= 0 && rhs % e as i128 == 0, "Moebius sum must divide evenly");
        assert_eq!(
            (rhs / e as i128) as u64,
            counts[e as usize - 1],
            "orbit census disagrees with Moebius inversion at degree {e}"
        );
    }
    Ok((points, counts))
}

fn moebius(n: u32) -> i64 {
    let mut n = n;
    let mut factors = 0;
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            n /= f;
            if n.is_multiple_of(f) {
                return 0;
            }
            factors += 1;
        } else {
            f += 1;
        }
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An F_p-point of the d-th symmetric power with its residue-disk
/// bookkeeping: a multiset of closed points whose degrees, counted with
/// multiplicity, sum to d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResidueDiskProfile {
    parts: Vec<(ClosedPoint, u32)>,
}

impl ResidueDiskProfile {
    pub fn new(parts: Vec<(ClosedPoint, u32)>) -> Result<ResidueDiskProfile> {
        if parts.is_empty() {
            return Err(Error::ParameterRange("a profile needs at least one part"));
        }
        if parts.iter().any(|(_, s)| *s == 0) {
            return Err(Error::ParameterRange("profile multiplicities must be >= 1"));
        }
        let mut parts = parts;
        parts.sort();
        if parts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::ParameterRange("profile parts must be distinct closed points"));
        }
        Ok(ResidueDiskProfile { parts })
    }

    pub fn parts(&self) -> &[(ClosedPoint, u32)] {
        &self.parts
    }

    /// Total degree: the symmetric power the profile lives in.
    pub fn degree(&self) -> u32 {
        self.parts.iter().map(|(pt, s)| pt.degree() * s).sum()
    }

    /// The local symmetry factor: the product of the factorials of the
    /// multiplicities.
    pub fn n_p(&self) -> u64 {
        self.parts.iter().map(|(_, s)| (1..=*s as u64).product::<u64>()).product()
    }

    /// Canonical text form: sorted part keys with multiplicities, joined by
    /// `+`, e.g. `d1:inf^1+d1:x0y0^2`.
    pub fn key(&self) -> String {
        self.parts
            .iter()
            .map(|(pt, s)| format!("{}^{}", pt.part_key(), s))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// All residue-disk profiles of total degree d, sorted canonically. The
/// census is cross-checked against the coefficient of t^d in the orbit
/// generating function prod over e of (1 - t^e)^(-a_e).
pub fn sym_profiles(curve: &CurveSpec, d: u32) -> Result<Vec<ResidueDiskProfile>> {
    if d == 0 {
        return Err(Error::ParameterRange("symmetric power degree must be at least 1"));
    }
    let (points, _) = closed_points(curve, d)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    profile_rec(&points, 0, d, &mut current, &mut out);
    let mut ways = vec![0u64; d as usize + 1];
    ways[0] = 1;
    for pt in &points {
        let deg = pt.degree() as usize;
        for v in deg..=d as usize {
            ways[v] += ways[v - deg];
        }
    }
    assert_eq!(
        out.len() as u64,
        ways[d as usize],
        "profile census disagrees with the generating function"
    );
    out.sort();
    Ok(out)
}

fn profile_rec(
    points: &[ClosedPoint],
    idx: usize,
    remaining: u32,
    current: &mut Vec<(ClosedPoint, u32)>,
    out: &mut Vec<ResidueDiskProfile>,
) {
    if remaining == 0 {
        out.push(ResidueDiskProfile { parts: current.clone() });
        return;
    }
    if idx == points.len() {
        return;
    }
    profile_rec(points, idx + 1, remaining, current, out);
    let deg = points[idx].degree();
    for s in 1..=remaining / deg {
        current.push((points[idx].clone(), s));
        profile_rec(points, idx + 1, remaining - s * deg, current, out);
        current.pop();
    }
}

/// Cap on the number of F_p-points of the d-th symmetric power: the floor of
/// `(1 + 2g p^(d/2) + p^d)^d`. For odd d the base is irrational; the power is
/// expanded as `X + Y sqrt(p)` over the integers and floored exactly.
pub fn sym_count_bound(g: u32, p: u64, d: u32) -> BigInt {
    if d == 0 {
        return BigInt::one();
    }
    let pb = BigInt::from(p);
    let a = BigInt::one() + pb.pow(d);
    if d.is_multiple_of(2) {
        let base = a + BigInt::from(2 * g as u64) * pb.pow(d / 2);
        base.pow(d)
    } else {
        let b = BigInt::from(2 * g as u64) * pb.pow((d - 1) / 2);
        let mut xx = BigInt::zero();
        let mut yy = BigInt::zero();
        let mut binom = BigInt::one();
        for j in 0..=d {
            let term = &binom * a.pow(d - j) * b.pow(j) * pb.pow(j / 2);
            if j % 2 == 0 {
                xx += term;
            } else {
                yy += term;
            }
            if j < d {
                binom = binom * BigInt::from(d - j) / BigInt::from(j + 1);
            }
        }
        xx + (yy.pow(2) * pb).sqrt()
    }
}

/// Order of vanishing at a closed point of the reduction of the basis
/// differential `x^a dx / y` (odd p; the model is completed to `y^2 = f(x)`
/// first, which rescales the differential by a unit). Local expansions give
/// closed forms: at an affine non-Weierstrass point `x - x0` is a uniformizer
/// and `y` is a unit, so the order is `a` times the order of `x`; at a
/// Weierstrass point `y` is a uniformizer with `x - x0` of order 2 and
/// `dx = unit * y dy`, so the `dx/y` factor contributes 0 and `x^a`
/// contributes `2a` times the indicator of `x0 = 0`; at infinity
/// `ord(x) = -2`, `ord(dx) = -3`, `ord(y) = -(2g+1)` combine to
/// `2g - 2 - 2a`.
pub fn vanishing_order(curve: &CurveSpec, point: &ClosedPoint, a: u32) -> Result<u64> {
    if curve.p == 2 {
        return Err(Error::EvenPrimeOrders);
    }
    if a >= curve.genus {
        return Err(Error::ParameterRange("differential exponent must be at most genus - 1"));
    }
    if !good_reduction(curve) {
        return Err(Error::BadReduction);
    }
    match point.coords {
        PointCoords::Infinity => Ok((2 * curve.genus - 2 - 2 * a) as u64),
        PointCoords::Affine { x, y } => {
            let ctx = FqCtx::new(curve.p, point.degree)?;
            if x >= ctx.order() || y >= ctx.order() {
                return Err(Error::PointNotOnCurve);
            }
            let xv = ctx.decode(x);
            let yv = ctx.decode(y);
            let gx = ctx.eval_int_poly(&curve.g, &xv);
            let hx = ctx.eval_int_poly(&curve.h, &xv);
            let lhs = ctx.add(&ctx.mul(&yv, &yv), &ctx.mul(&gx, &yv));
            if lhs != hx {
                return Err(Error::PointNotOnCurve);
            }
            let inv2 = ctx.scalar(gf::scalar_inv(2 % curve.p, curve.p));
            let w = ctx.add(&yv, &ctx.mul(&gx, &inv2));
            let x_is_zero = ctx.is_zero(&xv);
            let weierstrass = ctx.is_zero(&w);
            Ok(match (weierstrass, x_is_zero) {
                (_, false) => 0,
                (false, true) => a as u64,
                (true, true) => 2 * a as u64,
            })
        }
    }
}

/// Per-entry provenance of a disk matrix: the vanishing input k, the depth
/// added to it, and the multiplicity parameter the depth was taken at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryProvenance {
    pub k: u64,
    pub delta: u64,
    pub l: u32,
}

/// The d x d matrix with entries `k_ij + delta(k_ij, p, l)` governing one
/// residue disk, with per-entry provenance.
#[derive(Clone, Debug)]
pub struct DiskMatrix {
    matrix: SquareMatrix,
    provenance: Vec<Vec<EntryProvenance>>,
}

impl DiskMatrix {
    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &[Vec<EntryProvenance>] {
        &self.provenance
    }

    pub fn entries(&self) -> Vec<Vec<u64>> {
        self.provenance.iter().map(|row| row.iter().map(|e| e.k + e.delta).collect()).collect()
    }
}

/// Where the k-order inputs of a disk matrix come from.
#[derive(Clone, Copy, Debug)]
pub enum OrderSource<'a> {
    /// A d x d matrix of vanishing-order inputs `k_ij >= 1`, rows indexing
    /// differentials and columns indexing the disk coordinates.
    Explicit(&'a [Vec<u64>]),
    /// Every entry takes the worst value of `k + delta(k, p, l)` over
    /// `k in 1..=2g-1` (a nonzero differential has at most 2g-2 zeros, so
    /// k = ord + 1 never exceeds 2g-1).
    WorstCase,
}

fn worst_entry(p: u64, l: u32, g: u32) -> Result<EntryProvenance> {
    let mut best: Option<EntryProvenance> = None;
    for k in 1..=(2 * g as u64 - 1) {
        let d = delta(k, p, l)?;
        if best.as_ref().is_none_or(|b| k + d > b.k + b.delta) {
            best = Some(EntryProvenance { k, delta: d, l });
        }
    }
    Ok(best.expect("g >= 1 gives a nonempty range"))
}

/// Disk matrix for one profile. Columns run over the d disk coordinates,
/// expanded part-major (each part contributes degree x multiplicity
/// columns). By default every entry's depth uses l = d; in strict mode the
/// depth of a column uses the multiplicity of the part that owns it.
pub fn disk_matrix(
    profile: &ResidueDiskProfile,
    orders: OrderSource,
    p: u64,
    d: u32,
    g: u32,
    strict: bool,
) -> Result<DiskMatrix> {
    if d == 0 || profile.degree() != d {
        return Err(Error::ParameterRange("profile degree must equal d"));
    }
    if g == 0 {
        return Err(Error::ParameterRange("genus must be at least 1"));
    }
    let mut col_mult = Vec::with_capacity(d as usize);
    for (pt, s) in profile.parts() {
        for _ in 0..pt.degree() * s {
            col_mult.push(*s);
        }
    }
    let col_l: Vec<u32> = col_mult.iter().map(|s| if strict { *s } else { d }).collect();
    let n = d as usize;
    let mut provenance = Vec::with_capacity(n);
    match orders {
        OrderSource::Explicit(k) => {
            if k.len() != n || k.iter().any(|row| row.len() != n) {
                return Err(Error::BadOrderMatrix);
            }
            for row in k {
                let mut prow = Vec::with_capacity(n);
                for (j, &kij) in row.iter().enumerate() {
                    if kij == 0 {
                        return Err(Error::BadOrderMatrix);
                    }
                    let dv = delta(kij, p, col_l[j])?;
                    if kij.checked_add(dv).is_none() {
                        return Err(Error::ParameterRange("order entry too large"));
                    }
                    prow.push(EntryProvenance { k: kij, delta: dv, l: col_l[j] });
                }
                provenance.push(prow);
            }
        }
        OrderSource::WorstCase => {
            let per_col: Vec<EntryProvenance> =
                col_l.iter().map(|&l| worst_entry(p, l, g)).collect::<Result<_>>()?;
            for _ in 0..n {
                provenance.push(per_col.clone());
            }
        }
    }
    let rows: Vec<Vec<BigRational>> = provenance
        .iter()
        .map(|row| {
            row.iter().map(|e| BigRational::from_integer(BigInt::from(e.k + e.delta))).collect()
        })
        .collect();
    Ok(DiskMatrix { matrix: SquareMatrix::from_rows(rows)?, provenance })
}

/// The profile-independent worst case: a d x d matrix with every entry
/// `max over k in 1..=2g-1 of k + delta(k, p, d)`.
pub fn worst_case_matrix(p: u64, d: u32, g: u32) -> Result<DiskMatrix> {
    if d == 0 {
        return Err(Error::ParameterRange("matrix order must be at least 1"));
    }
    if g == 0 {
        return Err(Error::ParameterRange("genus must be at least 1"));
    }
    let entry = worst_entry(p, d, g)?;
    let n = d as usize;
    let provenance = vec![vec![entry.clone(); n]; n];
    let val = BigRational::from_integer(BigInt::from(entry.k + entry.delta));
    let rows = vec![vec![val; n]; n];
    Ok(DiskMatrix { matrix: SquareMatrix::from_rows(rows)?, provenance })
}

/// The modified permanent: over `0 <= i <= d`, sum the permanents of the
/// submatrices on any i rows and the FIRST i columns, weighted by `1/i!`;
/// the empty submatrix contributes 1. The column asymmetry is deliberate and
/// load-bearing.
pub fn per_prime(a: &SquareMatrix) -> Result<BigRational> {
    let d = a.order();
    if d > 4 {
        return Err(Error::ParameterRange("modified permanent is capped at order 4"));
    }
    let mut total = BigRational::one();
    for mask in 1u32..(1 << d) {
        let i = mask.count_ones() as usize;
        let rows: Vec<Vec<BigRational>> = (0..d)
            .filter(|r| mask >> r & 1 == 1)
            .map(|r| a.rows()[r][..i].to_vec())
            .collect();
        let sub = SquareMatrix::from_rows(rows)?;
        let fact: BigInt = (1..=i as u64).map(BigInt::from).product();
        total += BigRational::new(BigInt::one(), fact) * permanent(&sub)?;
    }
    Ok(total)
}

/// Where the disk count of a bound report comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiskCountSource {
    /// Profiles enumerated from the curve's closed points.
    Enumerated,
    /// The symmetric-power Weil cap `sym_count_bound`.
    HasseWeil,
    /// A cap supplied by the caller.
    UserCap(u64),
}

/// Whether a report's total carries the rational-point meaning or is a bare
/// arithmetic evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundLabel {
    /// rank_assumption <= genus - d and the independence assumption both
    /// asserted by the caller.
    WithAssumptions,
    ArithmeticOnly,
}

/// One residue disk's line in a bound report.
#[derive(Clone, Debug)]
pub struct DiskRow {
    pub profile_key: String,
    pub entries: Vec<Vec<u64>>,
    pub per: BigRational,
    pub per_prime: BigRational,
    pub n_p: u64,
    pub contribution: BigRational,
}

/// The final report: per-disk contributions `per_prime / n_p` and their
/// exact sum, plus a conservative total with every `n_p` replaced by 1.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub p: u64,
    pub d: u32,
    pub genus: u32,
    pub label: BoundLabel,
    pub rank_assumption: Option<u32>,
    pub assumption_a: bool,
    pub disk_count_source: DiskCountSource,
    pub disk_count: BigInt,
    pub rows: Vec<DiskRow>,
    pub total: BigRational,
    pub conservative_total: BigRational,
}

fn label_for(rank: u32, assumption_a: bool, genus: u32, d: u32) -> BoundLabel {
    if assumption_a && rank + d <= genus {
        BoundLabel::WithAssumptions
    } else {
        BoundLabel::ArithmeticOnly
    }
}

/// Worst-case bound: disk count times the modified permanent of the
/// worst-case matrix, with every symmetry factor taken as 1. The count comes
/// from the symmetric-power Weil cap or a user-supplied cap.
pub fn total_bound_worst_case(
    p: u64,
    d: u32,
    g: u32,
    source: DiskCountSource,
    assumptions: Option<(u32, bool)>,
) -> Result<BoundReport> {
    let count = match &source {
        DiskCountSource::Enumerated => {
            return Err(Error::ParameterRange(
                "worst-case mode needs a user cap or the Weil disk count",
            ))
        }
        DiskCountSource::HasseWeil => sym_count_bound(g, p, d),
        DiskCountSource::UserCap(n) => BigInt::from(*n),
    };
    let dm = worst_case_matrix(p, d, g)?;
    let per = permanent(dm.matrix())?;
    let pp = per_prime(dm.matrix())?;
    let contribution = BigRational::from_integer(count.clone()) * &pp;
    let (rank_assumption, assumption_a, label) = match assumptions {
        Some((r, aa)) => (Some(r), aa, label_for(r, aa, g, d)),
        None => (None, false, BoundLabel::ArithmeticOnly),
    };
    Ok(BoundReport {
        p,
        d,
        genus: g,
        label,
        rank_assumption,
        assumption_a,
        disk_count_source: source,
        disk_count: count,
        rows: vec![DiskRow {
            profile_key: "worst-case".into(),
            entries: dm.entries(),
            per,
            per_prime: pp,
            n_p: 1,
            contribution: contribution.clone(),
        }],
        total: contribution.clone(),
        conservative_total: contribution,
    })
}

/// Enumerated bound for a concrete curve: profiles come from `sym_profiles`,
/// each disk's matrix from the supplied per-profile order matrices (keyed by
/// profile key) or from the worst case when no orders are given.
pub fn total_bound_curve(
    curve: &CurveSpec,
    d: u32,
    orders: Option<&BTreeMap<String, Vec<Vec<u64>>>>,
    strict: bool,
) -> Result<BoundReport> {
    let profiles = sym_profiles(curve, d)?;
    let mut rows = Vec::with_capacity(profiles.len());
    let mut total = BigRational::zero();
    let mut conservative = BigRational::zero();
    for profile in &profiles {
        let key = profile.key();
        let source = match orders {
            Some(map) => {
                OrderSource::Explicit(map.get(&key).ok_or(Error::MissingOrders(key.clone()))?)
            }
            None => OrderSource::WorstCase,
        };
        let dm = disk_matrix(profile, source, curve.p, d, curve.genus, strict)?;
        let per = permanent(dm.matrix())?;
        let pp = per_prime(dm.matrix())?;
        let n_p = profile.n_p();
        let contribution = &pp / BigRational::from_integer(BigInt::from(n_p));
        total += &contribution;
        conservative += &pp;
        rows.push(DiskRow {
            profile_key: key,
            entries: dm.entries(),
            per,
            per_prime: pp,
            n_p,
            contribution,
        });
    }
    Ok(BoundReport {
        p: curve.p,
        d,
        genus: curve.genus,
        label: label_for(curve.rank_assumption, curve.assumption_a, curve.genus, d),
        rank_assumption: Some(curve.rank_assumption),
        assumption_a: curve.assumption_a,
        disk_count_source: DiskCountSource::Enumerated,
        disk_count: BigInt::from(profiles.len()),
        rows,
        total,
        conservative_total: conservative,
    })
}
