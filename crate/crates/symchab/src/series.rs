//! Valued power series with finitely stored support and their tropical data:
//! height graphs, vertex sets over box domains, maximal cells of the
//! tropicalization, restrictions, antiderivatives, and certified truncation
//! of pure series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chabauty::delta;
use crate::linear::{feasible, Constraint};
use crate::polytope::Polytope;
use crate::val::{val_p, Val};
use crate::{is_prime, Error, Result};

/// One stored term `a * t^u`: exponent vector, the coefficient's valuation,
/// and the coefficient itself when known exactly. Zero terms are never
/// stored, so the valuation is always finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedTerm {
    exponent: Vec<u32>,
    coeff_val: BigRational,
    coeff_exact: Option<BigRational>,
}

impl ValuedTerm {
    /// Term with an exactly known coefficient; its valuation is computed.
    pub fn exact(exponent: Vec<u32>, coeff: BigRational, prime: u64) -> Result<ValuedTerm> {
        if coeff.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        let v = match val_p(&coeff, prime)? {
            Val::Finite(v) => v,
            Val::Infinity => return Err(Error::ZeroCoefficient),
        };
        Ok(ValuedTerm { exponent, coeff_val: v, coeff_exact: Some(coeff) })
    }

    /// Term known only through its coefficient's valuation.
    pub fn with_val(exponent: Vec<u32>, coeff_val: BigRational) -> ValuedTerm {
        ValuedTerm { exponent, coeff_val, coeff_exact: None }
    }

    pub fn exponent(&self) -> &[u32] {
        &self.exponent
    }

    pub fn coeff_val(&self) -> &BigRational {
        &self.coeff_val
    }

    pub fn coeff_exact(&self) -> Option<&BigRational> {
        self.coeff_exact.as_ref()
    }

    fn is_pure_exponent(&self) -> bool {
        self.exponent.iter().filter(|e| **e != 0).count() <= 1
    }

    /// Height of the term at `w`: `v(a) + <u, w>`.
    fn height(&self, w: &[BigRational]) -> BigRational {
        &self.coeff_val + dot(&self.exponent, w)
    }
}

/// What the stored terms claim about the rest of the series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailCertificate {
    /// The stored terms are the whole series.
    Polynomial,
    /// Pure series whose variable-`i` part is an antiderivative of an
    /// integrally valued series with first unit coefficient in degree
    /// `k[i] - 1`; `None` marks a variable whose stored terms are already
    /// complete and need no truncation.
    PureIntegralDerivative { k: Vec<Option<u32>> },
}

/// A power series over `Q_p` stored through finitely many valued terms plus a
/// tail certificate. Terms are kept sorted by exponent and are pairwise
/// distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedSeries {
    prime: u64,
    dim: usize,
    terms: Vec<ValuedTerm>,
    tail: TailCertificate,
}

impl ValuedSeries {
    pub fn new(
        prime: u64,
        dim: usize,
        mut terms: Vec<ValuedTerm>,
        tail: TailCertificate,
    ) -> Result<ValuedSeries> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if dim == 0 {
            return Err(Error::ParameterRange("series need at least one variable"));
        }
        if terms.is_empty() {
            return Err(Error::ZeroSeries);
        }
        for t in &terms {
            if t.exponent.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: t.exponent.len() });
            }
            if let Some(c) = &t.coeff_exact {
                if c.is_zero() {
                    return Err(Error::ZeroCoefficient);
                }
                match val_p(c, prime)? {
                    Val::Finite(v) if v == t.coeff_val => {}
                    _ => {
                        return Err(Error::ParameterRange(
                            "stored valuation disagrees with the exact coefficient",
                        ))
                    }
                }
            }
        }
        terms.sort_by(|a, b| a.exponent.cmp(&b.exponent));
        for pair in terms.windows(2) {
            if pair[0].exponent == pair[1].exponent {
                return Err(Error::DuplicateExponent(pair[0].exponent.clone()));
            }
        }
        if let TailCertificate::PureIntegralDerivative { k } = &tail {
            if k.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.len() });
            }
            if k.iter().any(|e| matches!(e, Some(0))) {
                return Err(Error::ParameterRange("certificate degrees must be at least 1"));
            }
            if let Some(t) = terms.iter().find(|t| !t.is_pure_exponent()) {
                return Err(Error::NotPure(t.exponent.clone()));
            }
        }
        Ok(ValuedSeries { prime, dim, terms, tail })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ValuedTerm] {
        &self.terms
    }

    pub fn tail(&self) -> &TailCertificate {
        &self.tail
    }

    /// True when every stored exponent has at most one nonzero entry.
    pub fn is_pure(&self) -> bool {
        self.terms.iter().all(|t| t.is_pure_exponent())
    }
}

/// Product of coordinate rays `[m_1, inf) x ... x [m_d, inf)` with `m_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDomain {
    m: Vec<BigRational>,
}

impl BoxDomain {
    pub fn new(m: Vec<BigRational>) -> Result<BoxDomain> {
        if m.is_empty() {
            return Err(Error::ParameterRange("domains need at least one coordinate"));
        }
        if m.iter().any(|x| x.is_negative()) {
            return Err(Error::NegativeDomain);
        }
        Ok(BoxDomain { m })
    }

    pub fn from_integers(m: &[i64]) -> Result<BoxDomain> {
        BoxDomain::new(m.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect())
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn lower(&self) -> &[BigRational] {
        &self.m
    }

    pub fn contains(&self, w: &[BigRational]) -> bool {
        w.len() == self.m.len() && w.iter().zip(&self.m) .all(|(wi, mi)| wi >= mi)
    }

    fn constraints(&self) -> Vec<Constraint> {
        self.m
            .iter()
            .enumerate()
            .map(|(i, mi)| {
                let mut coeffs = vec![BigRational::zero(); self.m.len()];
                coeffs[i] = BigRational::one();
                Constraint::ge(coeffs, -mi.clone())
            })
            .collect()
    }

    fn min_lower(&self) -> &BigRational {
        self.m.iter().min().expect("domains are nonempty")
    }
}

fn dot(u: &[u32], w: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (e, wi) in u.iter().zip(w) {
        if *e != 0 {
            acc += BigRational::from_integer(BigInt::from(*e)) * wi;
        }
    }
    acc
}

fn exponent_diff(a: &[u32], b: &[u32]) -> Vec<BigRational> {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(BigInt::from(*x as i64 - *y as i64)))
        .collect()
}

/// Minimum height `m_f(w) = min_u (v(a_u) + <u, w>)` over the stored support.
pub fn min_height(f: &ValuedSeries, w: &[BigRational]) -> Result<BigRational> {
    if w.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: w.len() });
    }
    if w.iter().any(|x| x.is_negative()) {
        return Err(Error::OutsideDomain);
    }
    Ok(f.terms().iter().map(|t| t.height(w)).min().expect("series are nonzero"))
}

/// Terms attaining the minimum height at `w`, in exponent order. For a pure
/// series this reads the stored support, which must extend past the relevant
/// truncation cutoffs for the answer to be meaningful at small `w`.
pub fn vert_w(f: &ValuedSeries, w: &[BigRational]) -> Result<Vec<ValuedTerm>> {
    let m = min_height(f, w)?;
    Ok(f.terms().iter().filter(|t| t.height(w) == m).cloned().collect())
}

/// Kapranov membership: `w` lies on the tropicalization exactly when at least
/// two terms attain the minimum height there. `w` must lie in the box.
pub fn trop_membership(f: &ValuedSeries, w: &[BigRational], domain: &BoxDomain) -> Result<bool> {
    if !domain.contains(w) {
        return Err(Error::OutsideDomain);
    }
    Ok(vert_w(f, w)?.len() >= 2)
}

fn vert_over_box(terms: &[ValuedTerm], dim: usize, domain: &BoxDomain) -> Vec<ValuedTerm> {
    let boxed = domain.constraints();
    let mut out = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        // t is a vertex somewhere in the box iff its normal cone (where its
        // height is weakly minimal) meets the box.
        let mut cs = boxed.clone();
        for (j, s) in terms.iter().enumerate() {
            if i != j {
                cs.push(Constraint::ge(
                    exponent_diff(&s.exponent, &t.exponent),
                    s.coeff_val.clone() - &t.coeff_val,
                ));
            }
        }
        if feasible(dim, &cs) {
            out.push(t.clone());
        }
    }
    out
}

fn effective_multiplicity(domain: &BoxDomain) -> Result<u32> {
    let m = domain.min_lower();
    if !m.is_positive() {
        return Err(Error::ParameterRange(
            "pure series need a domain bounded away from zero",
        ));
    }
    // Smallest l with 1/l <= min(m): the cheapest truncation whose guarantee
    // region covers the whole box.
    let num = m.numer();
    let den = m.denom();
    let l = (den + num - BigInt::one()) / num;
    match l.to_u32() {
        Some(l) if l <= 64 => Ok(l.max(1)),
        _ => Err(Error::ParameterRange("domain lower bound too small to truncate against")),
    }
}

fn truncated_terms(f: &ValuedSeries, l: u32) -> Result<Vec<ValuedTerm>> {
    let k = match f.tail() {
        TailCertificate::PureIntegralDerivative { k } => k,
        TailCertificate::Polynomial => return Err(Error::MissingCertificate),
    };
    let mut kept = Vec::new();
    for t in f.terms() {
        let var = t.exponent.iter().position(|e| *e != 0);
        let keep = match var {
            None => true,
            Some(i) => match k[i] {
                None => true,
                Some(ki) => {
                    let cutoff = ki as u64 + delta(ki as u64, f.prime(), l)?;
                    (t.exponent[i] as u64) <= cutoff
                }
            },
        };
        if keep {
            kept.push(t.clone());
        }
    }
    Ok(kept)
}

/// All terms that attain the minimum height somewhere on the box.
///
/// A polynomial-kind series is read off its stored support directly. A pure
/// certified series is first truncated at the certified cutoffs for the
/// smallest multiplicity `l` with `[1/l, inf)^d` covering the box, which is
/// why the box must stay away from zero; the stored support must reach those
/// cutoffs.
pub fn vert_domain(f: &ValuedSeries, domain: &BoxDomain) -> Result<Vec<ValuedTerm>> {
    if domain.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: domain.dim() });
    }
    match f.tail() {
        TailCertificate::Polynomial => Ok(vert_over_box(f.terms(), f.dim(), domain)),
        TailCertificate::PureIntegralDerivative { .. } => {
            let l = effective_multiplicity(domain)?;
            let kept = truncated_terms(f, l)?;
            if kept.is_empty() {
                return Err(Error::ZeroSeries);
            }
            Ok(vert_over_box(&kept, f.dim(), domain))
        }
    }
}

/// An affine condition `coeffs . w + constant` compared against zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCondition {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl LinearCondition {
    fn eval(&self, w: &[BigRational]) -> BigRational {
        let mut acc = self.constant.clone();
        for (c, wi) in self.coeffs.iter().zip(w) {
            if !c.is_zero() {
                acc += c * wi;
            }
        }
        acc
    }
}

/// A maximal closed cell of the tropicalization inside a box, recorded as the
/// tie between one pair of terms together with the dominance and box
/// inequalities that cut it out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropCell {
    pair: (Vec<u32>, Vec<u32>),
    equalities: Vec<LinearCondition>,
    inequalities: Vec<LinearCondition>,
}

impl TropCell {
    /// The exponents whose tie defines the cell.
    pub fn pair(&self) -> (&[u32], &[u32]) {
        (&self.pair.0, &self.pair.1)
    }

    /// Conditions `coeffs . w + constant = 0`.
    pub fn equalities(&self) -> &[LinearCondition] {
        &self.equalities
    }

    /// Conditions `coeffs . w + constant >= 0`, box rows included.
    pub fn inequalities(&self) -> &[LinearCondition] {
        &self.inequalities
    }

    pub fn contains(&self, w: &[BigRational]) -> bool {
        self.equalities.iter().all(|c| c.coeffs.len() == w.len() && c.eval(w).is_zero())
            && self
                .inequalities
                .iter()
                .all(|c| c.coeffs.len() == w.len() && !c.eval(w).is_negative())
    }

    fn constraints(&self) -> Vec<Constraint> {
        let mut cs = Vec::new();
        for e in &self.equalities {
            cs.extend(Constraint::eq_pair(e.coeffs.clone(), e.constant.clone()));
        }
        for i in &self.inequalities {
            cs.push(Constraint::ge(i.coeffs.clone(), i.constant.clone()));
        }
        cs
    }
}

/// `a` is contained in `b` iff adding the strict negation of any single
/// constraint of `b` to `a`'s system is infeasible.
fn cell_subset(a: &TropCell, b: &TropCell, dim: usize) -> bool {
    let base = a.constraints();
    for g in b.constraints() {
        let mut cs = base.clone();
        cs.push(Constraint::gt(
            g.coeffs.iter().map(|c| -c).collect(),
            -g.constant.clone(),
        ));
        if feasible(dim, &cs) {
            return false;
        }
    }
    true
}

/// Maximal cells of the tropicalization of a polynomial-kind series inside a
/// box, for up to three variables. Each unordered pair of terms contributes
/// its closed tie locus; empty cells are dropped by exact feasibility, cells
/// strictly contained in another are dropped, and coincident cells (triple
/// ties along a common face) are kept once.
pub fn trop_cells(f: &ValuedSeries, domain: &BoxDomain) -> Result<Vec<TropCell>> {
    if domain.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: domain.dim() });
    }
    if f.dim() > 3 {
        return Err(Error::UnsupportedDimension { dim: f.dim(), cap: 3 });
    }
    if !matches!(f.tail(), TailCertificate::Polynomial) {
        return Err(Error::ParameterRange(
            "cell decomposition needs a polynomial-kind series; truncate first",
        ));
    }
    let terms = f.terms();
    let dim = f.dim();
    let box_rows: Vec<LinearCondition> = domain
        .lower()
        .iter()
        .enumerate()
        .map(|(i, mi)| {
            let mut coeffs = vec![BigRational::zero(); dim];
            coeffs[i] = BigRational::one();
            LinearCondition { coeffs, constant: -mi.clone() }
        })
        .collect();
    let mut cells = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let tie = LinearCondition {
                coeffs: exponent_diff(&terms[i].exponent, &terms[j].exponent),
                constant: terms[i].coeff_val.clone() - &terms[j].coeff_val,
            };
            let mut ineqs = Vec::new();
            for (s, t) in terms.iter().enumerate() {
                if s != i && s != j {
                    ineqs.push(LinearCondition {
                        coeffs: exponent_diff(&t.exponent, &terms[i].exponent),
                        constant: t.coeff_val.clone() - &terms[i].coeff_val,
                    });
                }
            }
            ineqs.extend(box_rows.iter().cloned());
            let cell = TropCell {
                pair: (terms[i].exponent.clone(), terms[j].exponent.clone()),
                equalities: vec![tie],
                inequalities: ineqs,
            };
            if feasible(dim, &cell.constraints()) {
                cells.push(cell);
            }
        }
    }
    let mut keep = Vec::new();
    'outer: for (i, a) in cells.iter().enumerate() {
        for (j, b) in cells.iter().enumerate() {
            if i == j {
                continue;
            }
            let ab = cell_subset(a, b, dim);
            let ba = cell_subset(b, a, dim);
            if ab && !ba {
                continue 'outer;
            }
            if ab && ba && j < i {
                continue 'outer;
            }
        }
        keep.push(a.clone());
    }
    Ok(keep)
}

/// Convex hull of the exponents attaining the minimum height at `w`.
pub fn gamma_w(f: &ValuedSeries, w: &[BigRational]) -> Result<Polytope> {
    let verts = vert_w(f, w)?;
    let points: Vec<Vec<BigRational>> = verts
        .iter()
        .map(|t| {
            t.exponent
                .iter()
                .map(|e| BigRational::from_integer(BigInt::from(*e)))
                .collect()
        })
        .collect();
    Polytope::convex_hull(&points, f.dim())
}

/// Restriction of `f` to the exponents in `support`, valid when every term
/// attaining the minimum height somewhere on the box survives. The result is
/// polynomial-kind.
pub fn auxiliary_polynomial(
    f: &ValuedSeries,
    domain: &BoxDomain,
    support: &[Vec<u32>],
) -> Result<ValuedSeries> {
    for s in support {
        if s.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), found: s.len() });
        }
    }
    let verts = vert_domain(f, domain)?;
    for v in &verts {
        if !support.iter().any(|s| s == &v.exponent) {
            return Err(Error::RestrictionMissesVertex(v.exponent.clone()));
        }
    }
    let kept: Vec<ValuedTerm> = f
        .terms()
        .iter()
        .filter(|t| support.iter().any(|s| s == &t.exponent))
        .cloned()
        .collect();
    ValuedSeries::new(f.prime(), f.dim(), kept, TailCertificate::Polynomial)
}

/// Antiderivative with zero constant term of a one-variable polynomial-kind
/// series whose coefficients all have valuation `>= 0`. The result carries
/// the pure certificate with `k` one past the first unit coefficient of the
/// input.
pub fn antiderivative(omega: &ValuedSeries) -> Result<ValuedSeries> {
    if omega.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: omega.dim() });
    }
    if !matches!(omega.tail(), TailCertificate::Polynomial) {
        return Err(Error::ParameterRange("antiderivatives need a polynomial-kind input"));
    }
    if omega.terms().iter().any(|t| t.coeff_val.is_negative()) {
        return Err(Error::NonIntegralCoefficient);
    }
    let k = omega
        .terms()
        .iter()
        .filter(|t| t.coeff_val.is_zero())
        .map(|t| t.exponent[0] + 1)
        .min()
        .ok_or(Error::NoUnitCoefficient)?;
    let mut terms = Vec::new();
    for t in omega.terms() {
        let n1 = BigInt::from(t.exponent[0] + 1);
        let exponent = vec![t.exponent[0] + 1];
        let term = match &t.coeff_exact {
            Some(c) => ValuedTerm::exact(exponent, c / BigRational::from_integer(n1), omega.prime())?,
            None => {
                let shift = match val_p(&BigRational::from_integer(n1), omega.prime())? {
                    Val::Finite(v) => v,
                    Val::Infinity => unreachable!("n + 1 >= 1"),
                };
                ValuedTerm::with_val(exponent, t.coeff_val.clone() - shift)
            }
        };
        terms.push(term);
    }
    ValuedSeries::new(
        omega.prime(),
        1,
        terms,
        TailCertificate::PureIntegralDerivative { k: vec![Some(k)] },
    )
}

/// Assemble one-variable parts vanishing at the origin into a pure
/// multivariable series, adding a valuation-only constant term unless its
/// valuation is infinite. Certificates are merged componentwise; the result
/// is polynomial-kind only when every part is.
pub fn assemble_pure(parts: &[ValuedSeries], constant_val: &Val) -> Result<ValuedSeries> {
    if parts.is_empty() {
        return Err(Error::ParameterRange("assembly needs at least one part"));
    }
    let prime = parts[0].prime();
    let dim = parts.len();
    let mut terms = Vec::new();
    let mut ks = Vec::with_capacity(dim);
    let mut all_polynomial = true;
    for (i, part) in parts.iter().enumerate() {
        if part.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: part.dim() });
        }
        if part.prime() != prime {
            return Err(Error::PrimeMismatch { expected: prime, found: part.prime() });
        }
        match part.tail() {
            TailCertificate::Polynomial => ks.push(None),
            TailCertificate::PureIntegralDerivative { k } => {
                all_polynomial = false;
                ks.push(k[0]);
            }
        }
        for t in part.terms() {
            if t.exponent[0] == 0 {
                return Err(Error::ParameterRange("assembled parts must vanish at the origin"));
            }
            let mut exponent = vec![0u32; dim];
            exponent[i] = t.exponent[0];
            terms.push(ValuedTerm {
                exponent,
                coeff_val: t.coeff_val.clone(),
                coeff_exact: t.coeff_exact.clone(),
            });
        }
    }
    if let Val::Finite(v) = constant_val {
        terms.push(ValuedTerm::with_val(vec![0; dim], v.clone()));
    }
    let tail = if all_polynomial {
        TailCertificate::Polynomial
    } else {
        TailCertificate::PureIntegralDerivative { k: ks }
    };
    ValuedSeries::new(prime, dim, terms, tail)
}

/// Certified truncation of a pure series: drop every term `t_i^n` with
/// `n > k_i + delta(k_i, p, l)`. The box must lie strictly between zero and
/// the guarantee threshold, `0 < min(m) < 1/l`; the vertex sets of input and
/// output agree on the part of the box inside `[1/l, inf)^d` (at the limiting
/// depths used here, ties entering below `1/l` may be lost).
pub fn truncate_pure(f: &ValuedSeries, domain: &BoxDomain, l: u32) -> Result<ValuedSeries> {
    if domain.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: domain.dim() });
    }
    if l == 0 {
        return Err(Error::ParameterRange("truncation needs l >= 1"));
    }
    if !matches!(f.tail(), TailCertificate::PureIntegralDerivative { .. }) {
        return Err(Error::MissingCertificate);
    }
    let eps = domain.min_lower();
    let threshold = BigRational::new(BigInt::one(), BigInt::from(l));
    if !eps.is_positive() || *eps >= threshold {
        return Err(Error::InvalidTruncationDomain);
    }
    let kept = truncated_terms(f, l)?;
    if kept.is_empty() {
        return Err(Error::ZeroSeries);
    }
    ValuedSeries::new(f.prime(), f.dim(), kept, TailCertificate::Polynomial)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn point(w: &[(i64, i64)]) -> Vec<BigRational> {
        w.iter().map(|(n, d)| rat(*n, *d)).collect()
    }

    /// 2 + t1 + t2 over Q_2.
    fn flat_line() -> ValuedSeries {
        ValuedSeries::new(
            2,
            2,
            vec![
                ValuedTerm::exact(vec![0, 0], int(2), 2).unwrap(),
                ValuedTerm::exact(vec![1, 0], int(1), 2).unwrap(),
                ValuedTerm::exact(vec![0, 1], int(1), 2).unwrap(),
            ],
            TailCertificate::Polynomial,
        )
        .unwrap()
    }

    fn one_var(coeffs: &[(u32, i64, i64)]) -> ValuedSeries {
        let terms = coeffs
            .iter()
            .map(|(e, n, d)| ValuedTerm::exact(vec![*e], rat(*n, *d), 2).unwrap())
            .collect();
        ValuedSeries::new(2, 1, terms, TailCertificate::Polynomial).unwrap()
    }

    fn exps(terms: &[ValuedTerm]) -> Vec<Vec<u32>> {
        terms.iter().map(|t| t.exponent().to_vec()).collect()
    }

    #[test]
    fn term_and_series_validation() {
        let t = ValuedTerm::exact(vec![1, 0], int(12), 2).unwrap();
        assert_eq!(*t.coeff_val(), int(2));
        assert!(ValuedTerm::exact(vec![0], int(0), 2).is_err());

        let dup = ValuedSeries::new(
            2,
            1,
            vec![
                ValuedTerm::exact(vec![1], int(1), 2).unwrap(),
                ValuedTerm::exact(vec![1], int(3), 2).unwrap(),
            ],
            TailCertificate::Polynomial,
        );
        assert!(matches!(dup, Err(Error::DuplicateExponent(_))));

        assert!(matches!(
            ValuedSeries::new(2, 1, vec![], TailCertificate::Polynomial),
            Err(Error::ZeroSeries)
        ));

        let mixed = ValuedSeries::new(
            2,
            2,
            vec![ValuedTerm::exact(vec![1, 1], int(1), 2).unwrap()],
            TailCertificate::PureIntegralDerivative { k: vec![Some(1), Some(1)] },
        );
        assert!(matches!(mixed, Err(Error::NotPure(_))));

        let lied = ValuedSeries::new(
            2,
            1,
            vec![ValuedTerm {
                exponent: vec![1],
                coeff_val: int(5),
                coeff_exact: Some(int(2)),
            }],
            TailCertificate::Polynomial,
        );
        assert!(lied.is_err());
    }

    #[test]
    fn vertex_sets_at_points() {
        let f = flat_line();
        assert_eq!(min_height(&f, &point(&[(1, 1), (1, 1)])).unwrap(), int(1));
        assert_eq!(vert_w(&f, &point(&[(1, 1), (1, 1)])).unwrap().len(), 3);
        let v = vert_w(&f, &point(&[(2, 1), (1, 1)])).unwrap();
        assert_eq!(exps(&v), vec![vec![0, 0], vec![0, 1]]);
        assert!(vert_w(&f, &point(&[(-1, 1), (0, 1)])).is_err());
        assert!(vert_w(&f, &point(&[(1, 1)])).is_err());
    }

    #[test]
    fn membership_matches_tie_count() {
        let f = flat_line();
        let p0 = BoxDomain::from_integers(&[0, 0]).unwrap();
        assert!(trop_membership(&f, &point(&[(1, 1), (1, 1)]), &p0).unwrap());
        assert!(trop_membership(&f, &point(&[(1, 2), (1, 2)]), &p0).unwrap());
        assert!(!trop_membership(&f, &point(&[(3, 1), (3, 1)]), &p0).unwrap());
        let far = BoxDomain::from_integers(&[2, 2]).unwrap();
        assert!(matches!(
            trop_membership(&f, &point(&[(1, 1), (1, 1)]), &far),
            Err(Error::OutsideDomain)
        ));
    }

    #[test]
    fn vertex_sets_over_boxes() {
        let f = flat_line();
        let all = vert_domain(&f, &BoxDomain::from_integers(&[0, 0]).unwrap()).unwrap();
        assert_eq!(all.len(), 3);
        let far = vert_domain(&f, &BoxDomain::from_integers(&[2, 2]).unwrap()).unwrap();
        assert_eq!(exps(&far), vec![vec![0, 0]]);
    }

    #[test]
    fn dyadic_coefficients_move_the_crossover() {
        // 1 + 4t: the t term is beaten everywhere on [0, inf).
        let f = one_var(&[(0, 1, 1), (1, 4, 1)]);
        for lo in [0i64, 3] {
            let v = vert_domain(&f, &BoxDomain::from_integers(&[lo]).unwrap()).unwrap();
            assert_eq!(exps(&v), vec![vec![0]]);
        }
        // 1 + t/4 ties at w = 2, inside [0, inf) but not [3, inf).
        let g = one_var(&[(0, 1, 1), (1, 1, 4)]);
        let near = vert_domain(&g, &BoxDomain::from_integers(&[0]).unwrap()).unwrap();
        assert_eq!(near.len(), 2);
        let far = vert_domain(&g, &BoxDomain::from_integers(&[3]).unwrap()).unwrap();
        assert_eq!(exps(&far), vec![vec![0]]);
        // t + t^2 ties only at w = 0.
        let h = one_var(&[(1, 1, 1), (2, 1, 1)]);
        assert_eq!(vert_domain(&h, &BoxDomain::from_integers(&[0]).unwrap()).unwrap().len(), 2);
        let inner = vert_domain(&h, &BoxDomain::from_integers(&[1]).unwrap()).unwrap();
        assert_eq!(exps(&inner), vec![vec![1]]);
    }

    #[test]
    fn three_maximal_cells_of_a_line() {
        let f = flat_line();
        let cells = trop_cells(&f, &BoxDomain::from_integers(&[0, 0]).unwrap()).unwrap();
        assert_eq!(cells.len(), 3);
        let probes = [
            point(&[(1, 1), (5, 1)]),
            point(&[(5, 1), (1, 1)]),
            point(&[(1, 2), (1, 2)]),
        ];
        for p in &probes {
            assert_eq!(cells.iter().filter(|c| c.contains(p)).count(), 1);
        }
        let apex = point(&[(1, 1), (1, 1)]);
        assert_eq!(cells.iter().filter(|c| c.contains(&apex)).count(), 3);
        let off = point(&[(2, 1), (3, 1)]);
        assert!(cells.iter().all(|c| !c.contains(&off)));
    }

    #[test]
    fn single_point_cell() {
        let f = one_var(&[(0, 1, 1), (1, 1, 1)]);
        let cells = trop_cells(&f, &BoxDomain::from_integers(&[0]).unwrap()).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(cells[0].contains(&point(&[(0, 1)])));
        assert!(!cells[0].contains(&point(&[(1, 1)])));
    }

    #[test]
    fn collinear_triple_tie_collapses_to_one_cell() {
        // 4 + 2t + t^2 over Q_2: all three pair ties are the single point
        // w = 1, so the three coincident cells must be reported once.
        let f = one_var(&[(0, 4, 1), (1, 2, 1), (2, 1, 1)]);
        let cells = trop_cells(&f, &BoxDomain::from_integers(&[0]).unwrap()).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(cells[0].contains(&point(&[(1, 1)])));
    }

    #[test]
    fn hulls_of_vertex_exponents() {
        let f = flat_line();
        let g1 = gamma_w(&f, &point(&[(2, 1), (1, 1)])).unwrap();
        assert_eq!(
            g1.vertices(),
            &[vec![int(0), int(0)], vec![int(0), int(1)]]
        );
        let g = ValuedSeries::new(
            2,
            2,
            vec![
                ValuedTerm::exact(vec![0, 0], int(4), 2).unwrap(),
                ValuedTerm::exact(vec![1, 0], int(1), 2).unwrap(),
                ValuedTerm::exact(vec![0, 1], int(8), 2).unwrap(),
            ],
            TailCertificate::Polynomial,
        )
        .unwrap();
        let g2 = gamma_w(&g, &point(&[(2, 1), (1, 1)])).unwrap();
        assert_eq!(
            g2.vertices(),
            &[vec![int(0), int(0)], vec![int(1), int(0)]]
        );
    }

    #[test]
    fn restriction_keeps_or_misses_vertices() {
        let f = flat_line();
        let domain = BoxDomain::from_integers(&[0, 0]).unwrap();
        let full = auxiliary_polynomial(
            &f,
            &domain,
            &[vec![0, 0], vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(full.terms(), f.terms());
        let miss = auxiliary_polynomial(&f, &domain, &[vec![0, 0]]);
        assert!(matches!(miss, Err(Error::RestrictionMissesVertex(_))));
    }

    #[test]
    fn antiderivative_shifts_and_certifies() {
        let omega = one_var(&[(0, 1, 1), (1, 1, 1), (2, 1, 1)]);
        let f = antiderivative(&omega).unwrap();
        assert_eq!(exps(f.terms()), vec![vec![1], vec![2], vec![3]]);
        let vals: Vec<BigRational> = f.terms().iter().map(|t| t.coeff_val().clone()).collect();
        assert_eq!(vals, vec![int(0), int(-1), int(0)]);
        assert_eq!(f.terms()[2].coeff_exact(), Some(&rat(1, 3)));
        assert_eq!(
            f.tail(),
            &TailCertificate::PureIntegralDerivative { k: vec![Some(1)] }
        );

        let no_unit = one_var(&[(0, 2, 1), (1, 4, 1)]);
        assert!(matches!(antiderivative(&no_unit), Err(Error::NoUnitCoefficient)));
        let fractional = one_var(&[(0, 1, 2)]);
        assert!(matches!(antiderivative(&fractional), Err(Error::NonIntegralCoefficient)));
    }

    #[test]
    fn valuation_only_coefficients_integrate() {
        let omega = ValuedSeries::new(
            2,
            1,
            vec![
                ValuedTerm::exact(vec![0], int(1), 2).unwrap(),
                ValuedTerm::with_val(vec![1], int(3)),
            ],
            TailCertificate::Polynomial,
        )
        .unwrap();
        let f = antiderivative(&omega).unwrap();
        // val(c/2) = 3 - 1 for the degree-2 output term.
        assert_eq!(*f.terms()[1].coeff_val(), int(2));
        assert!(f.terms()[1].coeff_exact().is_none());
    }

    #[test]
    fn assembly_embeds_parts_and_constant() {
        let part = antiderivative(&one_var(&[(0, 1, 1), (1, 1, 1), (2, 1, 1)])).unwrap();
        let f = assemble_pure(&[part.clone(), part.clone()], &Val::Finite(int(3))).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f.terms().len(), 7);
        assert!(f.is_pure());
        assert!(f.terms().iter().any(|t| t.exponent() == [0, 0] && *t.coeff_val() == int(3)));
        assert!(f.terms().iter().any(|t| t.exponent() == [3, 0]));
        assert!(f.terms().iter().any(|t| t.exponent() == [0, 3]));
        assert_eq!(
            f.tail(),
            &TailCertificate::PureIntegralDerivative { k: vec![Some(1), Some(1)] }
        );

        let g = assemble_pure(&[part.clone(), part], &Val::Infinity).unwrap();
        assert_eq!(g.terms().len(), 6);

        let with_constant = one_var(&[(0, 1, 1), (1, 1, 1)]);
        assert!(assemble_pure(&[with_constant], &Val::Infinity).is_err());
    }

    fn long_pure_part(n: u32) -> ValuedSeries {
        // Antiderivative of 1 + t + ... + t^(n-1): sum of t^m / m for m <= n.
        let omega: Vec<(u32, i64, i64)> = (0..n).map(|e| (e, 1, 1)).collect();
        antiderivative(&one_var(&omega)).unwrap()
    }

    #[test]
    fn truncation_applies_certified_cutoffs() {
        let part = long_pure_part(10);
        let f = assemble_pure(&[part.clone(), part], &Val::Finite(int(0))).unwrap();
        let domain = BoxDomain::new(vec![rat(1, 4), rat(1, 4)]).unwrap();
        let g = truncate_pure(&f, &domain, 2).unwrap();
        // Cutoff 1 + delta(1, 2, 2) = 4 per variable, plus the constant.
        assert_eq!(g.terms().len(), 9);
        assert!(g.terms().iter().all(|t| t.exponent().iter().all(|e| *e <= 4)));
        assert_eq!(g.tail(), &TailCertificate::Polynomial);
    }

    #[test]
    fn truncation_preconditions() {
        let part = long_pure_part(10);
        let f = assemble_pure(&[part.clone(), part], &Val::Finite(int(0))).unwrap();
        let at_threshold = BoxDomain::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(matches!(
            truncate_pure(&f, &at_threshold, 2),
            Err(Error::InvalidTruncationDomain)
        ));
        let touching_zero = BoxDomain::new(vec![rat(0, 1), rat(1, 4)]).unwrap();
        assert!(matches!(
            truncate_pure(&f, &touching_zero, 2),
            Err(Error::InvalidTruncationDomain)
        ));
        let poly = flat_line();
        let domain = BoxDomain::new(vec![rat(1, 4), rat(1, 4)]).unwrap();
        assert!(matches!(truncate_pure(&poly, &domain, 2), Err(Error::MissingCertificate)));
    }

    #[test]
    fn pure_vertex_sets_match_the_worked_restriction() {
        // Antiderivative of the geometric-style series: sum t^n / n, stored
        // far past any relevant cutoff. Over [1/2, inf) the surviving
        // exponents are 1, 2 and 4.
        let f = long_pure_part(24);
        let v = vert_domain(&f, &BoxDomain::new(vec![rat(1, 2)]).unwrap()).unwrap();
        assert_eq!(exps(&v), vec![vec![1], vec![2], vec![4]]);
        let aux = auxiliary_polynomial(
            &f,
            &BoxDomain::new(vec![rat(1, 2)]).unwrap(),
            &[vec![1], vec![2], vec![3], vec![4]],
        )
        .unwrap();
        assert_eq!(exps(aux.terms()), vec![vec![1], vec![2], vec![3], vec![4]]);
        assert!(matches!(
            vert_domain(&f, &BoxDomain::from_integers(&[0]).unwrap()),
            Err(Error::ParameterRange(_))
        ));
    }
}
