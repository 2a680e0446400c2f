//! Arithmetic in small finite fields F_{p^e}, realized as F_p[x] modulo a
//! canonical irreducible: the monic irreducible of degree e whose non-leading
//! coefficient vector, read base p low-to-high, encodes the least integer.
//! Elements are coefficient vectors of length e, low-to-high, reduced mod p.

use crate::{is_prime, Error, Result};

pub(crate) const DEGREE_CAP: u32 = 12;

pub(crate) struct FqCtx {
    p: u64,
    e: u32,
    order: u64,
    modulus: Vec<u64>,
}

impl FqCtx {
    pub(crate) fn new(p: u64, e: u32) -> Result<FqCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ParameterRange("field degree must be at least 1"));
        }
        if e > DEGREE_CAP {
            return Err(Error::FieldDegreeTooLarge { e, cap: DEGREE_CAP });
        }
        let order = p
            .checked_pow(e)
            .ok_or(Error::ParameterRange("field order exceeds the machine word"))?;
        let mut modulus = None;
        for code in 0..order {
            let mut cand = decode(code, p, e as usize);
            cand.push(1);
            if fp_is_irreducible(&cand, p) {
                modulus = Some(cand);
                break;
            }
        }
        let modulus = modulus.expect("an irreducible of every degree exists over F_p");
        Ok(FqCtx { p, e, order, modulus })
    }

    pub(crate) fn order(&self) -> u64 {
        self.order
    }

    pub(crate) fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub(crate) fn zero(&self) -> Vec<u64> {
        vec![0; self.e as usize]
    }

    pub(crate) fn one(&self) -> Vec<u64> {
        self.scalar(1)
    }

    /// The prime-field element n mod p, embedded.
    pub(crate) fn scalar(&self, n: u64) -> Vec<u64> {
        let mut a = self.zero();
        a[0] = n % self.p;
        a
    }

    pub(crate) fn scalar_i64(&self, n: i64) -> Vec<u64> {
        self.scalar(n.rem_euclid(self.p as i64) as u64)
    }

    pub(crate) fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|c| *c == 0)
    }

    pub(crate) fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub(crate) fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x % self.p) % self.p).collect()
    }

    pub(crate) fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let e = self.e as usize;
        let mut prod = vec![0u128; 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + (*x as u128) * (*y as u128)) % self.p as u128;
            }
        }
        // Reduce by the monic modulus from the top down.
        for idx in (e..prod.len()).rev() {
            let c = prod[idx];
            if c == 0 {
                continue;
            }
            prod[idx] = 0;
            for (j, m) in self.modulus.iter().enumerate().take(e) {
                let pos = idx - e + j;
                let sub = (c * (*m as u128)) % self.p as u128;
                prod[pos] = (prod[pos] + self.p as u128 - sub) % self.p as u128;
            }
        }
        prod.into_iter().take(e).map(|c| c as u64).collect()
    }

    pub(crate) fn pow(&self, a: &[u64], mut n: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        if self.is_zero(a) {
            return Err(Error::ParameterRange("inverse of zero in a finite field"));
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub(crate) fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, self.p)
    }

    /// Absolute trace down to F_p, returned as an integer in 0..p.
    pub(crate) fn trace_to_prime(&self, a: &[u64]) -> u64 {
        let mut acc = self.zero();
        let mut x = a.to_vec();
        for _ in 0..self.e {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc.iter().skip(1).all(|c| *c == 0), "trace lands in F_p");
        acc[0]
    }

    /// The unique square root in characteristic 2: a^(q/2).
    pub(crate) fn sqrt2(&self, a: &[u64]) -> Vec<u64> {
        debug_assert_eq!(self.p, 2);
        self.pow(a, self.order / 2)
    }

    /// Base-p integer encoding of the coefficient vector.
    pub(crate) fn encode(&self, a: &[u64]) -> u64 {
        let mut acc = 0u64;
        for c in a.iter().rev() {
            acc = acc * self.p + c;
        }
        acc
    }

    /// All field elements in ascending encoding order.
    pub(crate) fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.order).map(|code| decode(code, self.p, self.e as usize)).collect()
    }

    /// Inverse of `encode`.
    pub(crate) fn decode(&self, code: u64) -> Vec<u64> {
        debug_assert!(code < self.order);
        decode(code, self.p, self.e as usize)
    }

    /// Evaluate an integer-coefficient polynomial (low-to-high) at a field
    /// element, reducing the coefficients mod p.
    pub(crate) fn eval_int_poly(&self, coeffs: &[i64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.scalar_i64(*c));
        }
        acc
    }

    /// Evaluate a scalar F_p polynomial (low-to-high) at a field element.
    pub(crate) fn eval_fp_poly(&self, coeffs: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.scalar(*c));
        }
        acc
    }
}

fn decode(code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut digits = vec![0u64; len];
    let mut n = code;
    for d in digits.iter_mut() {
        *d = n % p;
        n /= p;
    }
    digits
}

// Scalar polynomials over F_p, coefficients low-to-high with no trailing
// zeros (the zero polynomial is the empty vector).

pub(crate) fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn fp_reduce(coeffs: &[i64], p: u64) -> Vec<u64> {
    fp_trim(coeffs.iter().map(|c| c.rem_euclid(p as i64) as u64).collect())
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + (*x as u128) * (*y as u128)) % p as u128;
        }
    }
    fp_trim(prod.into_iter().map(|c| c as u64).collect())
}

pub(crate) fn fp_scale(a: &[u64], s: u64, p: u64) -> Vec<u64> {
    fp_trim(a.iter().map(|c| ((*c as u128 * s as u128) % p as u128) as u64).collect())
}

pub(crate) fn fp_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    fp_trim(out)
}

pub(crate) fn fp_deriv(a: &[u64], p: u64) -> Vec<u64> {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| ((i as u128 % p as u128) * (*c as u128) % p as u128) as u64)
            .collect(),
    )
}

pub(crate) fn scalar_inv(s: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = s as u128 % p as u128;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        n >>= 1;
    }
    acc as u64
}

pub(crate) fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    let lead_inv = scalar_inv(*b.last().unwrap(), p);
    while r.len() >= b.len() {
        let r_trim = fp_trim(r.clone());
        if r_trim.len() < b.len() {
            return r_trim;
        }
        r = r_trim;
        let shift = r.len() - b.len();
        let factor = (*r.last().unwrap() as u128 * lead_inv as u128 % p as u128) as u64;
        for (j, c) in b.iter().enumerate() {
            let sub = *c as u128 * factor as u128 % p as u128;
            let pos = shift + j;
            r[pos] = ((r[pos] as u128 + p as u128 - sub) % p as u128) as u64;
        }
        r = fp_trim(r);
    }
    r
}

pub(crate) fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = fp_trim(a.to_vec());
    let mut y = fp_trim(b.to_vec());
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn fp_is_irreducible(cand: &[u64], p: u64) -> bool {
    let e = cand.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    for d in 1..=e / 2 {
        let count = (p as u128).pow(d as u32);
        for code in 0..count {
            let mut digits = vec![0u64; d];
            let mut n = code;
            for dig in digits.iter_mut() {
                *dig = (n % p as u128) as u64;
                n /= p as u128;
            }
            digits.push(1);
            if fp_rem(cand, &digits, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli_are_the_least_irreducibles() {
        assert_eq!(FqCtx::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FqCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FqCtx::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FqCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn f4_multiplication_table_fragment() {
        let f4 = FqCtx::new(2, 2).unwrap();
        let x = vec![0, 1];
        // x^2 = x + 1 under x^2 + x + 1.
        assert_eq!(f4.mul(&x, &x), vec![1, 1]);
        for a in f4.elements() {
            if !f4.is_zero(&a) {
                assert_eq!(f4.pow(&a, 3), f4.one());
            }
        }
    }

    #[test]
    fn traces_over_f4() {
        let f4 = FqCtx::new(2, 2).unwrap();
        assert_eq!(f4.trace_to_prime(&f4.zero()), 0);
        assert_eq!(f4.trace_to_prime(&f4.one()), 0);
        assert_eq!(f4.trace_to_prime(&[0, 1]), 1);
        assert_eq!(f4.trace_to_prime(&[1, 1]), 1);
    }

    #[test]
    fn inverses_and_square_roots_in_f8() {
        let f8 = FqCtx::new(2, 3).unwrap();
        for a in f8.elements() {
            if f8.is_zero(&a) {
                assert!(f8.inv(&a).is_err());
                continue;
            }
            let b = f8.inv(&a).unwrap();
            assert_eq!(f8.mul(&a, &b), f8.one());
            let s = f8.sqrt2(&a);
            assert_eq!(f8.mul(&s, &s), a);
        }
    }

    #[test]
    fn subfield_detection_via_frobenius() {
        let f4 = FqCtx::new(2, 2).unwrap();
        for a in f4.elements() {
            let in_f2 = f4.frobenius(&a) == a;
            assert_eq!(in_f2, f4.encode(&a) < 2);
        }
    }

    #[test]
    fn polynomial_gcd_over_f3() {
        // (x+1)^2 (x+2) and its derivative share the factor x+1 over F_3.
        let sq = fp_mul(&[1, 1], &[1, 1], 3);
        let f = fp_mul(&sq, &[2, 1], 3);
        let g = fp_gcd(&f, &fp_deriv(&f, 3), 3);
        assert_eq!(g.len(), 2);
        assert_eq!(fp_rem(&g, &[1, 1], 3), vec![]);
    }

    #[test]
    fn integer_poly_evaluation() {
        let f9 = FqCtx::new(3, 2).unwrap();
        // -1 reduces to 2 mod 3; evaluate x^2 - 1 at the generator t: t^2 = -1
        // under t^2 + 1, so the result is -2 = 1.
        let t = vec![0, 1];
        assert_eq!(f9.eval_int_poly(&[-1, 0, 1], &t), f9.scalar(1));
    }
}
