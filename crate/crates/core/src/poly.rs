//! Sparse multivariate polynomials over ℤ and prime fields 𝔽_p.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic with variables ordered row-major on the grid `X_{ij}`.
//! The canonical term order used for display, serialization and division
//! is *descending*: the leading term comes first.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, SerializeStruct, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

const MAX_PRIME: u64 = 1 << 61;

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) || p.is_multiple_of(3) {
        return false;
    }
    let mut k = 5u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) || p.is_multiple_of(k + 2) {
            return false;
        }
        k += 6;
    }
    true
}

/// The coefficient ring: ℤ or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Ring {
    Integers,
    PrimeField(u64),
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::PrimeField(p))
    }

    /// ℤ for characteristic 0, 𝔽_p otherwise.
    pub fn for_characteristic(characteristic: u64) -> Result<Ring> {
        if characteristic == 0 {
            Ok(Ring::Integers)
        } else {
            Ring::prime_field(characteristic)
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Integers => 0,
            Ring::PrimeField(p) => *p,
        }
    }

    /// Canonical representative: residues live in `0..p`.
    pub fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Ring::Integers => c,
            Ring::PrimeField(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }

    fn inverse(&self, c: &BigInt) -> Option<BigInt> {
        match self {
            Ring::Integers => {
                if c.abs().is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            Ring::PrimeField(p) => {
                let p = BigInt::from(*p);
                let c = c.mod_floor(&p);
                if c.is_zero() {
                    None
                } else {
                    Some(c.modpow(&(&p - 2u32), &p))
                }
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "ZZ"),
            Ring::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// A variable: either `X_{row,col}` on the Vandermonde grid (1-based, as in
/// the usual notation) or a standalone `Y_k` for reduced contexts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Grid { row: u32, col: u32 },
    Single(u32),
}

impl Var {
    pub fn grid(row: usize, col: usize) -> Var {
        assert!(row >= 1 && col >= 1, "grid variables are 1-based");
        Var::Grid {
            row: row as u32,
            col: col as u32,
        }
    }

    pub fn single(k: usize) -> Var {
        Var::Single(k as u32)
    }

    pub fn row(&self) -> Option<usize> {
        match self {
            Var::Grid { row, .. } => Some(*row as usize),
            Var::Single(_) => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Grid { row, col } => write!(f, "X_{row}_{col}"),
            Var::Single(k) => write!(f, "Y_{k}"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var> {
        let bad = || Error::Precondition(format!("unrecognized variable name {s:?}"));
        let parse = |t: &str| t.parse::<u32>().ok().filter(|&k| k >= 1);
        if let Some(rest) = s.strip_prefix("X_") {
            let (r, c) = rest.split_once('_').ok_or_else(bad)?;
            Ok(Var::Grid {
                row: parse(r).ok_or_else(bad)?,
                col: parse(c).ok_or_else(bad)?,
            })
        } else if let Some(rest) = s.strip_prefix("Y_") {
            Ok(Var::Single(parse(rest).ok_or_else(bad)?))
        } else {
            Err(bad())
        }
    }
}

/// A power product with positive exponents, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
    degree: u64,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::from_pairs([(v, 1)])
    }

    /// Builds a monomial from (variable, exponent) pairs; repeated variables
    /// accumulate and zero exponents are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        let exps: Vec<(Var, u32)> = map.into_iter().filter(|&(_, e)| e > 0).collect();
        let degree = exps.iter().map(|&(_, e)| u64::from(e)).sum();
        Monomial { exps, degree }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exps
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map_or(0, |i| self.exps[i].1)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (va, ea) = self.exps[i];
            let (vb, eb) = other.exps[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial {
            exps: out,
            degree: self.degree + other.degree,
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let f = other.exps[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial {
            exps: out,
            degree: self.degree - other.degree,
        })
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let exps: Vec<(Var, u32)> = if k == 0 {
            Vec::new()
        } else {
            self.exps.iter().map(|&(v, e)| (v, e * k)).collect()
        };
        let degree = exps.iter().map(|&(_, e)| u64::from(e)).sum();
        Monomial { exps, degree }
    }

    /// Componentwise minimum of exponents (the gcd of two monomials).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(
            self.exps
                .iter()
                .filter_map(|&(v, e)| match other.exponent(v) {
                    0 => None,
                    f => Some((v, e.min(f))),
                }),
        )
    }

    fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.exps.get(i), other.exps.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                        Ordering::Equal if ea == eb => {
                            i += 1;
                            j += 1;
                        }
                        Ordering::Equal => return ea.cmp(&eb),
                        // `self` has a positive power of a smaller variable.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.exps.len()))?;
        for (v, e) in &self.exps {
            map.serialize_entry(&v.to_string(), e)?;
        }
        map.end()
    }
}

/// An exact scalar produced by evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    /// The value as a rational; residues map to their canonical representative.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Rational(q) => q.clone(),
            Scalar::Residue { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Residue { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

/// A polynomial in canonical form: no zero coefficients, coefficients
/// reduced into the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    ring: Ring,
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero(ring: Ring) -> Self {
        SparsePoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, BigInt::one())
    }

    pub fn constant(ring: Ring, c: impl Into<BigInt>) -> Self {
        Self::term(ring, Monomial::one(), c)
    }

    pub fn term(ring: Ring, m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c.into());
        p
    }

    pub fn var(ring: Ring, v: Var) -> Self {
        Self::term(ring, Monomial::var(v), 1)
    }

    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let c = self.ring.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.ring.reduce(e.get() + c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_ring(&self, other: &SparsePoly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(other)?;
        let mut out = SparsePoly::zero(self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        SparsePoly::from_terms(
            self.ring,
            self.terms.iter().map(|(m, d)| (m.clone(), d * c)),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SparsePoly {
        // Multiplying by a monomial is injective on monomials: no collisions.
        SparsePoly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> SparsePoly {
        let mut base = self.clone();
        let mut acc = SparsePoly::one(self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Term-wise derivative; coefficients are reduced, so terms can vanish
    /// in positive characteristic.
    pub fn partial_derivative(&self, v: Var) -> SparsePoly {
        let mut out = SparsePoly::zero(self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lowered = m
                .checked_div(&Monomial::var(v))
                .expect("exponent is positive");
            out.add_term(lowered, c * BigInt::from(e));
        }
        out
    }

    /// Exact quotient by leading-term reduction; `NotDivisible` when a
    /// remainder would be left.
    pub fn exact_divide(&self, den: &SparsePoly) -> Result<SparsePoly> {
        self.check_ring(den)?;
        let (lead_m, lead_c) = den.leading_term().ok_or(Error::DivisionByZero)?;
        let (lead_m, lead_c) = (lead_m.clone(), lead_c.clone());
        let inverse = self.ring.inverse(&lead_c);
        let mut rem = self.clone();
        let mut quotient = SparsePoly::zero(self.ring);
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.checked_div(&lead_m).ok_or(Error::NotDivisible)?;
            let c = match (&inverse, self.ring) {
                (Some(inv), _) => self.ring.reduce(rc * inv),
                (None, Ring::Integers) => {
                    let (q, r) = rc.div_rem(&lead_c);
                    if !r.is_zero() {
                        return Err(Error::NotDivisible);
                    }
                    q
                }
                (None, Ring::PrimeField(_)) => unreachable!("nonzero residues are invertible"),
            };
            let step = den.mul_monomial(&m).scale(&c);
            rem = rem.try_sub(&step)?;
            quotient.add_term(m, c);
        }
        Ok(quotient)
    }

    /// The gcd of all terms' monomials.
    pub fn monomial_content(&self) -> Result<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(Error::ZeroPolynomial)?.clone();
        Ok(it.fold(first, |acc, m| acc.gcd(m)))
    }

    /// The p^e-th root of a polynomial over 𝔽_p: exists iff every exponent
    /// is divisible by p^e, and then the coefficients are unchanged because
    /// Frobenius fixes the prime field.
    pub fn frobenius_root(&self, e: u32) -> Result<SparsePoly> {
        let Ring::PrimeField(p) = self.ring else {
            return Err(Error::Precondition(
                "Frobenius roots need a prime-field polynomial".into(),
            ));
        };
        let q = p
            .checked_pow(e)
            .and_then(|q| u32::try_from(q).ok())
            .ok_or(Error::NoRoot { exponent: e })?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exps.iter().any(|&(_, k)| k % q != 0) {
                return Err(Error::NoRoot { exponent: e });
            }
            terms.insert(
                Monomial::from_pairs(m.exps.iter().map(|&(v, k)| (v, k / q))),
                c.clone(),
            );
        }
        Ok(SparsePoly {
            ring: self.ring,
            terms,
        })
    }

    /// Applies the monomial map `Y^γ ↦ Z^{Mγ}` where γ collects the exponents
    /// of `source` and `M` is `target.len() × source.len()`. Variables not in
    /// `source` are carried along unchanged.
    pub fn substitute_monomial_map(
        &self,
        source: &[Var],
        matrix: &IntMatrix,
        target: &[Var],
    ) -> Result<SparsePoly> {
        if matrix.cols() != source.len() || matrix.rows() != target.len() {
            return Err(Error::Precondition(format!(
                "monomial map is {}x{} but maps {} variables to {}",
                matrix.rows(),
                matrix.cols(),
                source.len(),
                target.len()
            )));
        }
        let mut out = SparsePoly::zero(self.ring);
        for (m, c) in &self.terms {
            let gamma: Vec<BigInt> = source
                .iter()
                .map(|&v| BigInt::from(m.exponent(v)))
                .collect();
            let mut pairs: Vec<(Var, u32)> = m
                .exps
                .iter()
                .filter(|(v, _)| !source.contains(v))
                .copied()
                .collect();
            for (r, &t) in target.iter().enumerate() {
                let image: BigInt = matrix.row(r).iter().zip(&gamma).map(|(a, g)| a * g).sum();
                if image.is_negative() {
                    return Err(Error::NegativeExponent);
                }
                let k = image
                    .to_u32()
                    .ok_or_else(|| Error::SizeCap("exponent overflow in monomial map".into()))?;
                pairs.push((t, k));
            }
            out.add_term(Monomial::from_pairs(pairs), c.clone());
        }
        Ok(out)
    }

    /// Renames variables; colliding terms are combined.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> SparsePoly {
        SparsePoly::from_terms(
            self.ring,
            self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())),
        )
    }

    /// Substitutes integer values (reduced into the ring) for some variables.
    pub fn specialize(&self, values: &BTreeMap<Var, BigInt>) -> SparsePoly {
        let mut out = SparsePoly::zero(self.ring);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in &m.exps {
                match values.get(&v) {
                    Some(x) => coeff *= self.ring.reduce(x.pow(e)),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), coeff);
        }
        out
    }

    /// Evaluates at a point. Over 𝔽_p the rational values are mapped into
    /// the field, which fails when a denominator is divisible by p.
    pub fn evaluate(&self, point: &BTreeMap<Var, BigRational>) -> Result<Scalar> {
        for v in self.variables() {
            if !point.contains_key(&v) {
                return Err(Error::MissingAssignment(v));
            }
        }
        match self.ring {
            Ring::Integers => {
                let mut acc = BigRational::zero();
                for (m, c) in &self.terms {
                    let mut t = BigRational::from_integer(c.clone());
                    for &(v, e) in &m.exps {
                        t *= point[&v].pow(e as i32);
                    }
                    acc += t;
                }
                Ok(Scalar::Rational(acc))
            }
            Ring::PrimeField(p) => {
                let modulus = BigInt::from(p);
                let mut residues: BTreeMap<Var, BigInt> = BTreeMap::new();
                for v in self.variables() {
                    let q = &point[&v];
                    let inv = self
                        .ring
                        .inverse(q.denom())
                        .ok_or_else(|| Error::NotInRing(format!("{q} has no image in GF({p})")))?;
                    residues.insert(v, (q.numer() * inv).mod_floor(&modulus));
                }
                let mut acc = BigInt::zero();
                for (m, c) in &self.terms {
                    let mut t = c.clone();
                    for &(v, e) in &m.exps {
                        t = (t * residues[&v].modpow(&BigInt::from(e), &modulus)) % &modulus;
                    }
                    acc += t;
                }
                let value = acc.mod_floor(&modulus).to_u64().expect("residue fits");
                Ok(Scalar::Residue { value, modulus: p })
            }
        }
    }

    /// Reinterprets an integer polynomial over 𝔽_p.
    pub fn reduce_mod(&self, p: u64) -> Result<SparsePoly> {
        let ring = Ring::prime_field(p)?;
        Ok(SparsePoly::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// Parses the JSON term list produced by `Serialize`.
    pub fn from_json_value(ring: Ring, value: &Value) -> Result<SparsePoly> {
        let bad = |path: String, msg: &str| Error::InvalidSupport {
            path,
            message: msg.to_string(),
        };
        let arr = value
            .as_array()
            .ok_or_else(|| bad("$".into(), "expected a list of terms"))?;
        let mut p = SparsePoly::zero(ring);
        for (i, t) in arr.iter().enumerate() {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .and_then(|s| BigInt::from_str(s).ok())
                .ok_or_else(|| bad(format!("[{i}].coeff"), "expected an integer string"))?;
            let mono = t
                .get("monomial")
                .and_then(Value::as_object)
                .ok_or_else(|| bad(format!("[{i}].monomial"), "expected an object"))?;
            let mut pairs = Vec::new();
            for (name, e) in mono {
                let v = Var::from_str(name)?;
                let e = e
                    .as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| bad(format!("[{i}].monomial.{name}"), "expected an exponent"))?;
                pairs.push((v, e));
            }
            p.add_term(Monomial::from_pairs(pairs), coeff);
        }
        Ok(p)
    }
}

struct TermRef<'a>(&'a Monomial, &'a BigInt);

impl Serialize for TermRef<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Term", 2)?;
        s.serialize_field("coeff", &self.1.to_string())?;
        s.serialize_field("monomial", self.0)?;
        s.end()
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in self.terms() {
            seq.serialize_element(&TermRef(m, c))?;
        }
        seq.end()
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let (neg, abs) = (c.is_negative(), c.abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl std::ops::$trait<&SparsePoly> for &SparsePoly {
            type Output = SparsePoly;

            /// Panics on a ring mismatch; use the `try_` form to handle it.
            fn $method(self, rhs: &SparsePoly) -> SparsePoly {
                self.$imp(rhs).expect("ring mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        self.scale(&BigInt::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ZZ: Ring = Ring::Integers;

    fn x() -> Var {
        Var::single(1)
    }
    fn y() -> Var {
        Var::single(2)
    }

    fn p(ring: Ring, terms: &[(i64, &[(Var, u32)])]) -> SparsePoly {
        SparsePoly::from_terms(
            ring,
            terms
                .iter()
                .map(|(c, m)| (Monomial::from_pairs(m.iter().copied()), BigInt::from(*c))),
        )
    }

    fn gf(q: u64) -> Ring {
        Ring::prime_field(q).unwrap()
    }

    #[test]
    fn ring_construction() {
        assert!(Ring::prime_field(7).is_ok());
        assert_eq!(Ring::prime_field(9), Err(Error::NotPrime(9)));
        assert_eq!(Ring::prime_field(1), Err(Error::NotPrime(1)));
        assert_eq!(Ring::for_characteristic(0).unwrap(), Ring::Integers);
    }

    #[test]
    fn grid_order_is_row_major() {
        assert!(Var::grid(1, 2) < Var::grid(2, 1));
        assert!(Var::grid(1, 1) < Var::grid(1, 2));
        let a = Monomial::var(Var::grid(1, 1));
        let b = Monomial::var(Var::grid(1, 2));
        assert!(a > b, "X_1_1 leads X_1_2 in lex order");
        let c = Monomial::from_pairs([(Var::grid(2, 2), 2)]);
        assert!(c > a, "higher degree leads");
    }

    #[test]
    fn difference_of_squares() {
        let a = p(ZZ, &[(1, &[(x(), 1)]), (-1, &[(y(), 1)])]);
        let b = p(ZZ, &[(1, &[(x(), 1)]), (1, &[(y(), 1)])]);
        assert_eq!(&a * &b, p(ZZ, &[(1, &[(x(), 2)]), (-1, &[(y(), 2)])]));
    }

    #[test]
    fn frobenius_squaring_in_char_two() {
        let s = p(gf(2), &[(1, &[(x(), 1)]), (1, &[(y(), 1)])]);
        assert_eq!(&s * &s, p(gf(2), &[(1, &[(x(), 2)]), (1, &[(y(), 2)])]));
    }

    #[test]
    fn negation_cancels() {
        let a = p(ZZ, &[(3, &[(x(), 2), (y(), 1)]), (-7, &[])]);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = SparsePoly::one(ZZ);
        let b = SparsePoly::one(gf(3));
        assert_eq!(a.try_add(&b), Err(Error::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn derivatives() {
        let f = p(ZZ, &[(1, &[(x(), 2), (y(), 1)])]);
        assert_eq!(
            f.partial_derivative(x()),
            p(ZZ, &[(2, &[(x(), 1), (y(), 1)])])
        );
        let f2 = p(gf(2), &[(1, &[(x(), 2), (y(), 1)])]);
        assert!(f2.partial_derivative(x()).is_zero());
    }

    #[test]
    fn exact_division_examples() {
        let num = p(ZZ, &[(1, &[(x(), 2)]), (-1, &[(y(), 2)])]);
        let den = p(ZZ, &[(1, &[(x(), 1)]), (-1, &[(y(), 1)])]);
        assert_eq!(
            num.exact_divide(&den).unwrap(),
            p(ZZ, &[(1, &[(x(), 1)]), (1, &[(y(), 1)])])
        );
        let num = p(ZZ, &[(1, &[(x(), 2)]), (1, &[])]);
        let den = p(ZZ, &[(1, &[(x(), 1)]), (1, &[])]);
        assert_eq!(num.exact_divide(&den), Err(Error::NotDivisible));
        assert_eq!(
            num.exact_divide(&SparsePoly::zero(ZZ)),
            Err(Error::DivisionByZero)
        );
        // 2x / 3 is not integral.
        let num = p(ZZ, &[(2, &[(x(), 1)])]);
        assert_eq!(
            num.exact_divide(&SparsePoly::constant(ZZ, 3)),
            Err(Error::NotDivisible)
        );
    }

    #[test]
    fn monomial_content_examples() {
        let f = p(
            ZZ,
            &[(1, &[(x(), 2), (y(), 1)]), (1, &[(x(), 1), (y(), 2)])],
        );
        assert_eq!(
            f.monomial_content().unwrap(),
            Monomial::from_pairs([(x(), 1), (y(), 1)])
        );
        let g = p(ZZ, &[(1, &[(x(), 3)])]);
        assert_eq!(
            g.monomial_content().unwrap(),
            Monomial::from_pairs([(x(), 3)])
        );
        assert_eq!(
            SparsePoly::zero(ZZ).monomial_content(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn frobenius_root_examples() {
        let f = p(gf(2), &[(1, &[(x(), 2), (y(), 2)]), (1, &[(x(), 2)])]);
        assert_eq!(
            f.frobenius_root(1).unwrap(),
            p(gf(2), &[(1, &[(x(), 1), (y(), 1)]), (1, &[(x(), 1)])])
        );
        let g = p(gf(3), &[(1, &[(x(), 2)]), (1, &[])]);
        assert_eq!(g.frobenius_root(1), Err(Error::NoRoot { exponent: 1 }));
        assert!(matches!(
            SparsePoly::one(ZZ).frobenius_root(1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monomial_map_examples() {
        let z = Var::single(9);
        let f = p(ZZ, &[(1, &[(x(), 2), (y(), 3)])]);
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        assert_eq!(
            f.substitute_monomial_map(&[x(), y()], &m, &[z]).unwrap(),
            p(ZZ, &[(1, &[(z, 5)])])
        );
        let id = IntMatrix::identity(2);
        assert_eq!(
            f.substitute_monomial_map(&[x(), y()], &id, &[x(), y()])
                .unwrap(),
            f
        );
        let neg = IntMatrix::from_rows(&[vec![1, -1]]);
        assert_eq!(
            f.substitute_monomial_map(&[x(), y()], &neg, &[z]),
            Err(Error::NegativeExponent)
        );
    }

    #[test]
    fn evaluation() {
        let f = p(ZZ, &[(1, &[(x(), 2)]), (-1, &[(y(), 1)])]);
        let pt: BTreeMap<Var, BigRational> = [
            (x(), BigRational::from_integer(3.into())),
            (y(), BigRational::from_integer(2.into())),
        ]
        .into();
        assert_eq!(
            f.evaluate(&pt).unwrap(),
            Scalar::Rational(BigRational::from_integer(7.into()))
        );
        assert!(SparsePoly::zero(ZZ)
            .evaluate(&BTreeMap::new())
            .unwrap()
            .is_zero());
        let missing: BTreeMap<Var, BigRational> =
            [(x(), BigRational::from_integer(1.into()))].into();
        assert_eq!(f.evaluate(&missing), Err(Error::MissingAssignment(y())));
        let f5 = f.reduce_mod(5).unwrap();
        assert_eq!(
            f5.evaluate(&pt).unwrap(),
            Scalar::Residue {
                value: 2,
                modulus: 5
            }
        );
    }

    #[test]
    fn json_round_trip() {
        let big: BigInt = "-12345678901234567890".parse().unwrap();
        let f = SparsePoly::from_terms(
            ZZ,
            [
                (
                    Monomial::from_pairs([(Var::grid(1, 1), 2), (Var::grid(2, 2), 1)]),
                    big,
                ),
                (Monomial::one(), BigInt::from(3)),
            ],
        );
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"[{"coeff":"-12345678901234567890","monomial":{"X_1_1":2,"X_2_2":1}},{"coeff":"3","monomial":{}}]"#
        );
        let back = SparsePoly::from_json_value(ZZ, &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    fn arb_poly(ring: Ring) -> impl Strategy<Value = SparsePoly> {
        proptest::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2, 0u32..=2), 0..=4).prop_map(
            move |terms| {
                SparsePoly::from_terms(
                    ring,
                    terms.into_iter().map(|(c, a, b, d)| {
                        (
                            Monomial::from_pairs([
                                (Var::single(1), a),
                                (Var::single(2), b),
                                (Var::single(3), d),
                            ]),
                            BigInt::from(c),
                        )
                    }),
                )
            },
        )
    }

    fn arb_ring() -> impl Strategy<Value = Ring> {
        prop_oneof![
            Just(Ring::Integers),
            Just(Ring::PrimeField(2)),
            Just(Ring::PrimeField(3)),
            Just(Ring::PrimeField(5)),
        ]
    }

    proptest! {
        #[test]
        fn binomial_square_is_canonical((a, b) in arb_ring().prop_flat_map(|r| (arb_poly(r), arb_poly(r)))) {
            let sum = &a + &b;
            let lhs = &sum * &sum;
            let two = SparsePoly::constant(a.ring(), 2);
            let rhs = &(&(&a * &a) + &(&two * &(&a * &b))) + &(&b * &b);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exact_divide_inverts_multiplication((q, d) in arb_ring().prop_flat_map(|r| (arb_poly(r), arb_poly(r)))) {
            prop_assume!(!d.is_zero());
            let prod = &q * &d;
            prop_assert_eq!(prod.exact_divide(&d).unwrap(), q);
        }

        #[test]
        fn frobenius_root_inverts_power(
            (r, e) in (prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..=2)
                .prop_flat_map(|(p, e)| (arb_poly(Ring::PrimeField(p)), Just(e)))
        ) {
            let Ring::PrimeField(p) = r.ring() else { unreachable!() };
            let powered = r.pow(p.pow(e));
            prop_assert_eq!(powered.frobenius_root(e).unwrap(), r);
        }

        #[test]
        fn unimodular_monomial_map_is_invertible(
            f in arb_poly(Ring::Integers),
            k in 0i64..=2,
        ) {
            // (a, b, c) -> (a + k b, b, c) and back; exponents stay non-negative.
            let vars = [Var::single(1), Var::single(2), Var::single(3)];
            let m = IntMatrix::from_rows(&[vec![1, k, 0], vec![0, 1, 0], vec![0, 0, 1]]);
            let inv = IntMatrix::from_rows(&[vec![1, -k, 0], vec![0, 1, 0], vec![0, 0, 1]]);
            let there = f.substitute_monomial_map(&vars, &m, &vars).unwrap();
            let back = there.substitute_monomial_map(&vars, &inv, &vars).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
