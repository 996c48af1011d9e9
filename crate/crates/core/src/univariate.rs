//! Univariate polynomials over ℚ: Sturm sequences, real-root counting and
//! isolation, rational roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Polynomial;

/// Dense coefficients, constant term first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// Reads a polynomial in the single variable `var` with real coefficients.
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            if !c.is_real() || m.support().any(|v| v != var) {
                return None;
            }
            let e = m.get(var) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigRational::zero());
            }
            coeffs[e] = c.re().clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lc(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().expect("nonempty") / d.lc();
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc().clone();
        UniPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// `p, p', -rem(p, p'), …`.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let mut next = self.derivative();
        while !next.is_zero() {
            let r = seq.last().expect("nonempty").div_rem(&next).1;
            seq.push(next);
            next = UniPoly::new(r.coeffs.into_iter().map(|c| -c).collect());
        }
        seq
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        let at_neg_inf = changes(seq.iter().map(|p| {
            let s = sign(p.lc());
            if p.degree().unwrap_or(0) % 2 == 1 { -s } else { s }
        }));
        let at_pos_inf = changes(seq.iter().map(|p| sign(p.lc())));
        at_neg_inf - at_pos_inf
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_between(&self, a: &BigRational, b: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        let va = changes(seq.iter().map(|p| sign(&p.eval(a))));
        let vb = changes(seq.iter().map(|p| sign(&p.eval(b))));
        va.saturating_sub(vb)
    }

    /// Disjoint intervals `(a, b]` each holding exactly one real root, in
    /// increasing order.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        // Cauchy bound
        let lc = sf.lc().abs();
        let bound = sf.coeffs.iter().map(|c| c.abs() / &lc).fold(BigRational::zero(), |a, b| a.max(b))
            + BigRational::one();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((a, b)) = stack.pop() {
            match sf.count_roots_between(&a, &b) {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let mid = (&a + &b) / BigRational::from_integer(2.into());
                    stack.push((mid.clone(), b));
                    stack.push((a, mid));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// All rational roots, or `None` when the coefficients are too large for
    /// divisor enumeration.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        let sf = self.squarefree();
        let Some(deg) = sf.degree() else {
            return Some(Vec::new());
        };
        if deg == 0 {
            return Some(Vec::new());
        }
        // clear denominators
        let lcm = sf
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = sf.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let mut roots = Vec::new();
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero");
        if low > 0 {
            roots.push(BigRational::zero());
        }
        let a0 = ints[low].abs().to_u64()?;
        let an = ints.last().expect("nonzero").abs().to_u64()?;
        const LIMIT: u64 = 1 << 40;
        if a0 > LIMIT || an > LIMIT {
            return None;
        }
        for p in divisors(a0) {
            for q in divisors(an) {
                for s in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(p) * s, BigInt::from(q));
                    if sf.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}
