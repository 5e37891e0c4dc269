use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use splitnet_milp::Rational;

/// Dense exponent vector over a fixed symbol table, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients; no zero terms stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Monomial(e), Rational::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation with `0⁰ = 1`.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= x.pow(e);
                }
            }
            total += t;
        }
        total
    }

    /// Largest exponent of variable `i` across terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Renders in descending grlex order, e.g. `2*k1*x1^2 - x2 + 3`.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { names[v].clone() } else { format!("{}^{e}", names[v]) })
                .collect();
            if factors.is_empty() {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &SparsePolynomial) -> SparsePolynomial {
        assert_eq!(self.nvars, rhs.nvars, "symbol tables differ");
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        SparsePolynomial { nvars: self.nvars, terms: acc }
    }
}

/// Quotient of polynomials; no gcd normalization is attempted.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    pub numerator: SparsePolynomial,
    pub denominator: SparsePolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("division by the zero polynomial")]
pub struct ZeroDenominator;

impl RationalFunction {
    pub fn new(numerator: SparsePolynomial, denominator: SparsePolynomial) -> Result<Self, ZeroDenominator> {
        if denominator.is_zero() {
            return Err(ZeroDenominator);
        }
        Ok(RationalFunction { numerator, denominator })
    }

    pub fn from_poly(p: SparsePolynomial) -> Self {
        let n = p.nvars();
        RationalFunction { numerator: p, denominator: SparsePolynomial::one(n) }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.denominator == o.denominator {
            return RationalFunction {
                numerator: &self.numerator + &o.numerator,
                denominator: self.denominator.clone(),
            };
        }
        RationalFunction {
            numerator: &(&self.numerator * &o.denominator) + &(&o.numerator * &self.denominator),
            denominator: &self.denominator * &o.denominator,
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction { numerator: -&self.numerator, denominator: self.denominator.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction {
            numerator: &self.numerator * &o.numerator,
            denominator: &self.denominator * &o.denominator,
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self, ZeroDenominator> {
        if o.numerator.is_zero() {
            return Err(ZeroDenominator);
        }
        Ok(RationalFunction {
            numerator: &self.numerator * &o.denominator,
            denominator: &self.denominator * &o.numerator,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { numerator: self.numerator.pow(e), denominator: self.denominator.pow(e) }
    }

    /// Identically zero iff the numerator is.
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_from(seed: &[i64], nvars: usize) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(nvars);
        for chunk in seed.chunks(nvars + 1) {
            if chunk.len() == nvars + 1 {
                let exps = chunk[1..].iter().map(|e| e.unsigned_abs() as u32 % 3).collect();
                p.add_term(Monomial(exps), Rational::from(chunk[0]));
            }
        }
        p
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = SparsePolynomial::var(2, 0);
        let y = SparsePolynomial::var(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        let q = &(&x * &x) - &(&y * &y);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.display(&names), "x^2 - y^2");
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        let p = SparsePolynomial::monomial(vec![0, 2], Rational::from(3));
        assert_eq!(p.eval(&[Rational::zero(), Rational::from(2)]), Rational::from(12));
    }

    proptest! {
        #[test]
        fn ring_laws_and_evaluation(a in proptest::collection::vec(-3i64..4, 0..12),
                                    b in proptest::collection::vec(-3i64..4, 0..12),
                                    pt in proptest::collection::vec(-3i64..4, 2)) {
            let (p, q) = (poly_from(&a, 2), poly_from(&b, 2));
            let x: Vec<Rational> = pt.into_iter().map(Rational::from).collect();
            prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
            prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert!((&(&p + &q) - &q) == p);
        }
    }
}
