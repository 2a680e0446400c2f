//! Exact feasibility of small systems of linear inequalities over Q.
//!
//! Fourier-Motzkin elimination with support for strict inequalities. Every
//! combination step collapses constraints that share a direction, which keeps
//! the intermediate systems near the number of distinct normal directions; the
//! ambient dimensions here never exceed five, so this is comfortably exact and
//! fast for the constraint sets the crate produces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// One constraint `coeffs . x + constant >= 0` (`> 0` when `strict`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub strict: bool,
}

impl Constraint {
    pub fn ge(coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        Constraint { coeffs, constant, strict: false }
    }

    pub fn gt(coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        Constraint { coeffs, constant, strict: true }
    }

    /// The two non-strict constraints expressing `coeffs . x + constant = 0`.
    pub fn eq_pair(coeffs: Vec<BigRational>, constant: BigRational) -> [Self; 2] {
        let neg: Vec<BigRational> = coeffs.iter().map(|c| -c).collect();
        [
            Constraint::ge(coeffs, constant.clone()),
            Constraint::ge(neg, -constant),
        ]
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Holds for constant constraints only.
    fn constant_ok(&self) -> bool {
        if self.strict {
            self.constant.is_positive()
        } else {
            !self.constant.is_negative()
        }
    }

    /// Scale to a primitive integer coefficient vector; the key identifies the
    /// direction so parallel constraints can be collapsed to the tightest one.
    fn direction_key(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| &lcm * c.numer() / c.denom()).collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if !g.is_zero() && !g.is_one() {
            for v in &mut ints {
                *v /= &g;
            }
        }
        ints
    }
}

/// Decide whether the system has a solution in `R^dim`.
pub fn feasible(dim: usize, constraints: &[Constraint]) -> bool {
    let mut current: Vec<Constraint> = constraints.to_vec();
    debug_assert!(current.iter().all(|c| c.coeffs.len() == dim));
    for var in (0..dim).rev() {
        match collapse(current) {
            Some(kept) => current = kept,
            None => return false,
        }
        current = eliminate(current, var);
    }
    collapse(current).is_some()
}

/// Keep the tightest constraint per direction, dropping satisfied constant
/// rows. Returns `None` when a constant row is violated.
fn collapse(constraints: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut by_dir: HashMap<Vec<BigInt>, Constraint> = HashMap::new();
    for c in constraints {
        if c.is_constant() {
            if !c.constant_ok() {
                return None;
            }
            continue;
        }
        let key = c.direction_key();
        // Rescale the constant to match the primitive direction so constants
        // are comparable between parallel constraints.
        let scale = scale_for(&c, &key);
        let scaled = Constraint {
            coeffs: key.iter().map(|k| BigRational::from_integer(k.clone())).collect(),
            constant: &c.constant * &scale,
            strict: c.strict,
        };
        match by_dir.get_mut(&key) {
            None => {
                by_dir.insert(key, scaled);
            }
            Some(existing) => {
                // Smaller constant = stronger lower bound on coeffs . x.
                let stronger = scaled.constant < existing.constant
                    || (scaled.constant == existing.constant && scaled.strict && !existing.strict);
                if stronger {
                    *existing = scaled;
                }
            }
        }
    }
    Some(by_dir.into_values().collect())
}

/// The positive factor mapping `c.coeffs` onto the primitive vector `key`.
fn scale_for(c: &Constraint, key: &[BigInt]) -> BigRational {
    for (q, k) in c.coeffs.iter().zip(key) {
        if !q.is_zero() {
            return BigRational::from_integer(k.clone()) / q;
        }
    }
    BigRational::one()
}

/// Fourier-Motzkin elimination of variable `var`.
fn eliminate(constraints: Vec<Constraint>, var: usize) -> Vec<Constraint> {
    let mut lower = Vec::new(); // positive coefficient on var
    let mut upper = Vec::new(); // negative coefficient on var
    let mut keep = Vec::new();
    for c in constraints {
        let a = &c.coeffs[var];
        if a.is_zero() {
            keep.push(c);
        } else if a.is_positive() {
            lower.push(c);
        } else {
            upper.push(c);
        }
    }
    for lo in &lower {
        for up in &upper {
            let a = lo.coeffs[var].clone();
            let b = -up.coeffs[var].clone();
            // b * lo + a * up cancels var; both multipliers are positive.
            let coeffs: Vec<BigRational> = lo
                .coeffs
                .iter()
                .zip(&up.coeffs)
                .map(|(l, u)| &b * l + &a * u)
                .collect();
            let constant = &b * &lo.constant + &a * &up.constant;
            keep.push(Constraint { coeffs, constant, strict: lo.strict || up.strict });
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn triangle_is_feasible() {
        // x >= 0, y >= 0, x + y <= 1.
        let cs = vec![
            Constraint::ge(vec![q(1), q(0)], q(0)),
            Constraint::ge(vec![q(0), q(1)], q(0)),
            Constraint::ge(vec![q(-1), q(-1)], q(1)),
        ];
        assert!(feasible(2, &cs));
    }

    #[test]
    fn contradictory_halfplanes_are_infeasible() {
        // x >= 1 and x <= 0.
        let cs = vec![
            Constraint::ge(vec![q(1)], q(-1)),
            Constraint::ge(vec![q(-1)], q(0)),
        ];
        assert!(!feasible(1, &cs));
    }

    #[test]
    fn strictness_separates_point_from_open_halfline() {
        // x >= 0 and x <= 0 meet at a point; x > 0 and x <= 0 do not meet.
        let closed = vec![
            Constraint::ge(vec![q(1)], q(0)),
            Constraint::ge(vec![q(-1)], q(0)),
        ];
        assert!(feasible(1, &closed));
        let open = vec![
            Constraint::gt(vec![q(1)], q(0)),
            Constraint::ge(vec![q(-1)], q(0)),
        ];
        assert!(!feasible(1, &open));
    }

    #[test]
    fn equality_pair_pins_a_line() {
        // x = y, x >= 1/2, y <= 1/3 is infeasible.
        let mut cs = Constraint::eq_pair(vec![q(1), q(-1)], q(0)).to_vec();
        cs.push(Constraint::ge(vec![q(1), q(0)], qr(-1, 2)));
        cs.push(Constraint::ge(vec![q(0), q(-1)], qr(1, 3)));
        assert!(!feasible(2, &cs));
        // Without the ceiling it is feasible.
        let mut cs2 = Constraint::eq_pair(vec![q(1), q(-1)], q(0)).to_vec();
        cs2.push(Constraint::ge(vec![q(1), q(0)], qr(-1, 2)));
        assert!(feasible(2, &cs2));
    }

    #[test]
    fn parallel_constraints_collapse_to_tightest() {
        // x >= 1, 2x >= 1 (weaker), x <= 3.
        let cs = vec![
            Constraint::ge(vec![q(1)], q(-1)),
            Constraint::ge(vec![q(2)], q(-1)),
            Constraint::ge(vec![q(-1)], q(3)),
        ];
        assert!(feasible(1, &cs));
        let cs2 = vec![
            Constraint::ge(vec![q(1)], q(-1)),
            Constraint::ge(vec![q(2)], q(-1)),
            Constraint::ge(vec![q(-1)], qr(1, 2)),
        ];
        assert!(!feasible(1, &cs2));
    }

    #[test]
    fn four_dimensional_box_with_cut() {
        // Unit box in R^4 cut by x1+x2+x3+x4 >= 7/2: still feasible.
        let mut cs = Vec::new();
        for i in 0..4 {
            let mut up = vec![q(0); 4];
            up[i] = q(1);
            cs.push(Constraint::ge(up.clone(), q(0)));
            let mut down = vec![q(0); 4];
            down[i] = q(-1);
            cs.push(Constraint::ge(down, q(1)));
        }
        cs.push(Constraint::ge(vec![q(1); 4], qr(-7, 2)));
        assert!(feasible(4, &cs));
        // Cut above the box's total reach: infeasible.
        let mut cs2 = cs.clone();
        cs2.pop();
        cs2.push(Constraint::ge(vec![q(1); 4], qr(-9, 2)));
        assert!(!feasible(4, &cs2));
    }
}
