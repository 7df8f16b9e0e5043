//! Lattice geometry of exponent sets: minima, the common divisor `d`,
//! affine dimension, Smith normal form and reduction to span coordinates.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{gcd_all, IntMatrix};

/// A point of ℕⁿ: the exponents of one column of the Vandermonde matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u64>);

impl ExponentVector {
    pub fn new(coords: Vec<u64>) -> Self {
        ExponentVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise difference `self - other` as signed integers.
    pub fn diff(&self, other: &ExponentVector) -> Vec<BigInt> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
            .collect()
    }
}

impl From<Vec<u64>> for ExponentVector {
    fn from(v: Vec<u64>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// An ordered tuple Γ = (γ₁, …, γ_N) of pairwise distinct points of ℕⁿ.
///
/// Order matters: it is the column order of the Vandermonde matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    n: usize,
    vectors: Vec<ExponentVector>,
}

impl Support {
    pub fn new(n: usize, vectors: Vec<ExponentVector>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "ambient dimension must be positive"));
        }
        if vectors.is_empty() {
            return Err(invalid(
                "exponents",
                "at least one exponent vector is required",
            ));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != n {
                return Err(invalid(
                    &format!("exponents[{i}]"),
                    &format!("expected {n} coordinates, found {}", v.dim()),
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, v) in vectors.iter().enumerate() {
            if !seen.insert(v) {
                return Err(invalid(
                    &format!("exponents[{i}]"),
                    &format!("duplicate exponent vector {v}"),
                ));
            }
        }
        Ok(Support { n, vectors })
    }

    /// Convenience constructor from plain rows; the dimension is taken from
    /// the first row.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        Support::new(n, rows.iter().cloned().map(ExponentVector).collect())
    }

    /// Parses `{"n": 2, "exponents": [[2,0],[0,2],[2,2]]}`, reporting the
    /// offending field path on failure.
    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| invalid("$", "expected a JSON object"))?;
        let n = obj
            .get("n")
            .ok_or_else(|| invalid("n", "missing field"))?
            .as_u64()
            .filter(|&n| n > 0)
            .ok_or_else(|| invalid("n", "expected a positive integer"))? as usize;
        let rows = obj
            .get("exponents")
            .ok_or_else(|| invalid("exponents", "missing field"))?
            .as_array()
            .ok_or_else(|| invalid("exponents", "expected an array of arrays"))?;
        let mut vectors = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let coords = row
                .as_array()
                .ok_or_else(|| invalid(&format!("exponents[{i}]"), "expected an array"))?;
            let mut v = Vec::with_capacity(coords.len());
            for (j, c) in coords.iter().enumerate() {
                let path = format!("exponents[{i}][{j}]");
                match c.as_i64() {
                    Some(x) if x < 0 => {
                        return Err(invalid(&path, &format!("negative exponent {x}")))
                    }
                    _ => {}
                }
                let x = c
                    .as_u64()
                    .ok_or_else(|| invalid(&path, "expected a non-negative integer"))?;
                v.push(x);
            }
            vectors.push(ExponentVector(v));
        }
        Support::new(n, vectors)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| invalid("$", &format!("malformed JSON: {e}")))?;
        Support::from_json_value(&value)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of exponent vectors, N.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ExponentVector] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> &ExponentVector {
        &self.vectors[i]
    }

    pub fn max_exponent(&self) -> u64 {
        self.vectors
            .iter()
            .flat_map(|v| v.0.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// The exponent vectors as a set, forgetting column order.
    pub fn as_set(&self) -> BTreeSet<ExponentVector> {
        self.vectors.iter().cloned().collect()
    }

    /// Adds `shift` to every vector.
    pub fn translated(&self, shift: &ExponentVector) -> Support {
        assert_eq!(shift.dim(), self.n);
        let vectors = self
            .vectors
            .iter()
            .map(|v| ExponentVector(v.0.iter().zip(&shift.0).map(|(a, b)| a + b).collect()))
            .collect();
        Support { n: self.n, vectors }
    }

    /// Multiplies every coordinate by `factor` (> 0).
    pub fn scaled(&self, factor: u64) -> Support {
        assert!(factor > 0);
        let vectors = self
            .vectors
            .iter()
            .map(|v| ExponentVector(v.0.iter().map(|c| c * factor).collect()))
            .collect();
        Support { n: self.n, vectors }
    }

    /// Divides every coordinate by `divisor`, which must divide all of them.
    pub fn divided(&self, divisor: u64) -> Result<Support> {
        if divisor == 0
            || self
                .vectors
                .iter()
                .flat_map(|v| &v.0)
                .any(|c| c % divisor != 0)
        {
            return Err(Error::Precondition(format!(
                "{divisor} does not divide every exponent"
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| ExponentVector(v.0.iter().map(|c| c / divisor).collect()))
            .collect();
        Ok(Support { n: self.n, vectors })
    }

    /// Reorders columns: the i-th vector of the result is `self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Support {
        assert_eq!(perm.len(), self.len());
        Support {
            n: self.n,
            vectors: perm.iter().map(|&i| self.vectors[i].clone()).collect(),
        }
    }

    /// Rows γᵢ − γ₁ for i ≥ 2, as an (N−1)×n integer matrix.
    pub fn difference_matrix(&self) -> IntMatrix {
        let base = &self.vectors[0];
        let rows: Vec<Vec<BigInt>> = self.vectors[1..].iter().map(|v| v.diff(base)).collect();
        if rows.is_empty() {
            IntMatrix::zeros(0, self.n)
        } else {
            IntMatrix::from_rows(&rows)
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vectors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Support {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Support", 2)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("exponents", &self.vectors)?;
        s.end()
    }
}

fn invalid(path: &str, message: &str) -> Error {
    Error::InvalidSupport {
        path: path.to_string(),
        message: message.to_string(),
    }
}

/// γ̄: the componentwise minimum over all vectors.
pub fn componentwise_min(s: &Support) -> ExponentVector {
    let mut min = s.vectors[0].0.clone();
    for v in &s.vectors[1..] {
        for (m, &c) in min.iter_mut().zip(&v.0) {
            *m = (*m).min(c);
        }
    }
    ExponentVector(min)
}

/// Translates the support by −γ̄ and returns it together with γ̄.
pub fn normalize(s: &Support) -> (Support, ExponentVector) {
    let min = componentwise_min(s);
    let vectors = s
        .vectors
        .iter()
        .map(|v| ExponentVector(v.0.iter().zip(&min.0).map(|(a, b)| a - b).collect()))
        .collect();
    (Support { n: s.n, vectors }, min)
}

/// The largest d with (Γ − γ̄)/d ⊂ ℕⁿ.
pub fn d_gamma(s: &Support) -> Result<u64> {
    if s.len() < 2 {
        return Err(Error::DegenerateSupport(
            "d_gamma needs at least two exponent vectors".into(),
        ));
    }
    let (normalized, _) = normalize(s);
    let g = normalized
        .vectors
        .iter()
        .flat_map(|v| v.0.iter().copied())
        .fold(0u64, |acc, c| acc.gcd(&c));
    debug_assert!(g > 0, "distinct vectors cannot all normalize to zero");
    Ok(g)
}

/// Dimension of the affine span of Γ, computed by exact elimination.
pub fn affine_dimension(s: &Support) -> usize {
    if s.len() < 2 {
        return 0;
    }
    s.difference_matrix().rank()
}

/// p-adic valuation of a positive integer.
pub fn p_adic_valuation(mut value: u64, p: u64) -> u32 {
    assert!(p >= 2 && value > 0);
    let mut r = 0;
    while value.is_multiple_of(p) {
        value /= p;
        r += 1;
    }
    r
}

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain along the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// The nonzero invariant factors d₁ | d₂ | ….
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form with a fixed pivot rule: the entry of smallest
/// absolute value in the active block, ties broken in row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut remainder_left = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                remainder_left |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                remainder_left |= !d[(t, j)].is_zero();
            }
            if remainder_left {
                let (pi, pj) = smallest_entry(&d, t).expect("nonzero remainder exists");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row t and column t are clear; enforce divisibility of the block.
            let pivot = d[(t, t)].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    let rank = (0..rows.min(cols))
        .filter(|&i| !d[(i, i)].is_zero())
        .count();
    SnfResult { u, d, v, rank }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Affine change of lattice coordinates taking Γ into ℤᵐ, m = affine dim:
/// `x ↦ ((x − base) · matrix)[..m] − shift`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SpanTransform {
    pub base: ExponentVector,
    /// Unimodular n×n matrix acting on row vectors.
    pub matrix: IntMatrix,
    pub dimension: usize,
    #[serde(serialize_with = "crate::linalg::serialize_ints")]
    pub shift: Vec<BigInt>,
}

impl SpanTransform {
    /// Image of an arbitrary point before the final shift is applied; all
    /// n coordinates are returned.
    pub fn linear_image(&self, x: &ExponentVector) -> Vec<BigInt> {
        let diff = IntMatrix::from_rows(&[x.diff(&self.base)]);
        diff.mul(&self.matrix).row(0).to_vec()
    }

    pub fn apply(&self, x: &ExponentVector) -> Vec<BigInt> {
        self.linear_image(x)
            .into_iter()
            .take(self.dimension)
            .zip(&self.shift)
            .map(|(a, s)| a - s)
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.matrix.determinant().abs().is_one()
    }
}

/// Maps the support into its own affine span, ℤᵐ with m = affine dimension,
/// by a unimodular change of coordinates followed by a translation making
/// every coordinate non-negative with zero minima. Lattice lengths of
/// differences are preserved.
pub fn reduce_to_span_coordinates(s: &Support) -> Result<(Support, SpanTransform)> {
    if s.len() < 2 {
        return Err(Error::DegenerateSupport(
            "span coordinates need at least two exponent vectors".into(),
        ));
    }
    let m = affine_dimension(s);
    let transform = if m == s.n() {
        SpanTransform {
            base: ExponentVector::zero(s.n()),
            matrix: IntMatrix::identity(s.n()),
            dimension: m,
            shift: componentwise_min(s)
                .0
                .iter()
                .map(|&c| BigInt::from(c))
                .collect(),
        }
    } else {
        let snf = smith_normal_form(&s.difference_matrix());
        debug_assert_eq!(snf.rank, m);
        let mut t = SpanTransform {
            base: s.vectors[0].clone(),
            matrix: snf.v,
            dimension: m,
            shift: vec![BigInt::zero(); m],
        };
        let images: Vec<Vec<BigInt>> = s.vectors.iter().map(|v| t.linear_image(v)).collect();
        for img in &images {
            debug_assert!(img[m..].iter().all(Zero::is_zero));
        }
        t.shift = (0..m)
            .map(|k| images.iter().map(|img| img[k].clone()).min().unwrap())
            .collect();
        t
    };
    let vectors = s
        .vectors
        .iter()
        .map(|v| {
            let coords = transform
                .apply(v)
                .iter()
                .map(|c| c.to_u64().expect("shifted coordinates are non-negative"))
                .collect();
            ExponentVector(coords)
        })
        .collect();
    Ok((
        Support::new(m.max(1), vectors_or_point(vectors, m))?,
        transform,
    ))
}

// A 0-dimensional span cannot occur for distinct vectors with N ≥ 2; keep
// the constructor total anyway.
fn vectors_or_point(vectors: Vec<ExponentVector>, m: usize) -> Vec<ExponentVector> {
    if m == 0 {
        vectors
            .into_iter()
            .map(|_| ExponentVector(vec![0]))
            .collect()
    } else {
        vectors
    }
}

/// Gcd of the coordinates of γ_i − γ_j: the lattice length of that segment.
pub fn lattice_length(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    gcd_all(diff.iter())
}
