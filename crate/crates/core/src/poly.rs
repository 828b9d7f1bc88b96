//! Sparse multivariate polynomials over the integers.
//!
//! This is the coefficient ring for everything else in the crate:
//! `Z[x, y, w1, w2, ...]` where `x` and `y` are the reserved ring variables
//! and all other names are weight indeterminates. Polynomials are kept in
//! expanded normal form at all times, so equality is map equality and the
//! canonical string is a total function of the value.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("invalid variable name `{0}`")]
    InvalidVarName(String),
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("exponent at offset {pos} must be a nonnegative integer literal")]
    BadExponent { pos: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
}

/// A variable name: `[a-zA-Z_][a-zA-Z0-9_]*`. `x` and `y` are the reserved
/// ring variables; everything else is a weight indeterminate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: &str) -> Result<VarName, PolyError> {
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            }
            _ => false,
        };
        if ok {
            Ok(VarName(Arc::from(name)))
        } else {
            Err(PolyError::InvalidVarName(name.to_string()))
        }
    }

    pub fn x() -> VarName {
        VarName(Arc::from("x"))
    }

    pub fn y() -> VarName {
        VarName(Arc::from("y"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for the ring variables `x` and `y`.
    pub fn is_reserved(&self) -> bool {
        &*self.0 == "x" || &*self.0 == "y"
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A power product of variables. The empty product is the unit monomial.
/// Zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<VarName, u32>,
}

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: VarName, exp: u32) -> Monomial {
        let mut exps = BTreeMap::new();
        if exp > 0 {
            exps.insert(v, exp);
        }
        Monomial { exps }
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.values().map(|&e| u64::from(e)).sum()
    }

    pub fn exponent_of(&self, v: &VarName) -> u32 {
        self.exps.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &u32)> {
        self.exps.iter()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (v, e) in &other.exps {
            *exps.entry(v.clone()).or_insert(0) += e;
        }
        Monomial { exps }
    }

    /// Exponent-wise quotient, or `None` when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exps.clone();
        for (v, e) in &other.exps {
            match exps.get_mut(v) {
                Some(have) if *have >= *e => {
                    *have -= e;
                    if *have == 0 {
                        exps.remove(v);
                    }
                }
                _ => return None,
            }
        }
        Some(Monomial { exps })
    }

    fn render(&self) -> String {
        self.exps
            .iter()
            .map(|(v, &e)| {
                if e == 1 {
                    v.as_str().to_string()
                } else {
                    format!("{}^{}", v.as_str(), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Canonical term order: ascending total degree, ties broken by the
/// lexicographic comparison of the sorted `(variable, exponent)` lists.
/// This is a total order fixing the serialization, but it is not
/// compatible with multiplication, so division uses `cmp_grlex` instead.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().cmp(other.exps.iter()))
    }
}

/// Graded lexicographic order: total degree first, ties by the exponent
/// vectors compared variable by variable (alphabetically), higher exponent
/// on the earlier variable winning. Compatible with multiplication, which
/// the lead-term division loop relies on.
fn cmp_grlex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match a.total_degree().cmp(&b.total_degree()) {
        Ordering::Equal => {}
        other => return other,
    }
    let mut ia = a.exps.iter().peekable();
    let mut ib = b.exps.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => {
                if va == vb {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    ia.next();
                    ib.next();
                } else if va < vb {
                    return Ordering::Greater;
                } else {
                    return Ordering::Less;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in expanded normal form: a map from monomials to nonzero
/// arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Poly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Poly { terms }
    }

    pub fn from_var(v: VarName) -> Poly {
        Poly::from_monomial(Monomial::var(v, 1), BigInt::one())
    }

    pub fn x() -> Poly {
        Poly::from_var(VarName::x())
    }

    pub fn y() -> Poly {
        Poly::from_var(VarName::y())
    }

    /// `x - 1`, the rank base of the interlace polynomials.
    pub fn x_minus_one() -> Poly {
        &Poly::x() - &Poly::one()
    }

    /// `y - 1`, the nullity base of the interlace polynomials.
    pub fn y_minus_one() -> Poly {
        &Poly::y() - &Poly::one()
    }

    pub fn from_monomial(m: Monomial, c: BigInt) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(iter: I) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(text: &str) -> Result<Poly, PolyError> {
        crate::parser::parse(text)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Monomial::is_unit)
    }

    /// The constant value, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn variables(&self) -> BTreeSet<VarName> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(have) => {
                *have += c;
                if have.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Multiply by a single term; cheaper than building a one-term `Poly`.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(tm, tc)| (tm.mul(m), tc * c))
            .collect();
        Poly { terms }
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Simultaneous substitution; unbound variables pass through.
    pub fn substitute(&self, bindings: &BTreeMap<VarName, Poly>) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut passthrough = Monomial::unit();
            let mut bound = Poly::constant(c.clone());
            for (v, &e) in m.iter() {
                match bindings.get(v) {
                    Some(p) => bound = &bound * &p.pow(e),
                    None => passthrough = passthrough.mul(&Monomial::var(v.clone(), e)),
                }
            }
            out += &bound.mul_term(&passthrough, &BigInt::one());
        }
        out
    }

    fn grlex_leading(&self) -> (Monomial, BigInt) {
        self.terms
            .iter()
            .max_by(|(ma, _), (mb, _)| cmp_grlex(ma, mb))
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("leading term of a nonzero polynomial")
    }

    /// Exact division: returns `c` with `c * d == self`, or `NotDivisible`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (dm, dc) = d.grlex_leading();
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.grlex_leading();
            let qm = rm.div(&dm).ok_or(PolyError::NotDivisible)?;
            let qc = &rc / &dc;
            if (&qc * &dc) != rc {
                return Err(PolyError::NotDivisible);
            }
            rem = &rem - &d.mul_term(&qm, &qc);
            quo.add_term(qm, qc);
        }
        Ok(quo)
    }

    /// Deterministic serialization: terms in canonical monomial order,
    /// coefficients `±1` printed as a bare sign. Round-trips through `parse`.
    pub fn canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.sign() == Sign::Minus;
            let abs = c.abs();
            let mono = m.render();
            let piece = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else {
                format!("{}*{}", abs, mono)
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&piece);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        // Shortcuts matter: most vertex weights are 0 or 1.
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (am, ac) in &self.terms {
            for (bm, bc) in &rhs.terms {
                out.add_term(am.mul(bm), ac * bc);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly { terms }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}
