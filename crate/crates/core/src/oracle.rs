//! Independent checks against which the main engines are tested: a
//! brute-force determinant, classical-Vandermonde divisibility, factoring
//! of the collinear case after specialization, Jacobian rank evidence for
//! the independence of the minors, and Newton-polygon indecomposability.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{affine_dimension, Support};
use crate::poly::{Monomial, Ring, SparsePoly, Var};
use crate::vandermonde::{classical_product, determinant, row_monomial, VandermondeInstance};

pub const LEIBNIZ_MAX_N: usize = 8;
pub const LINE_CASE_MAX_DEGREE: usize = 24;
pub const LINE_CASE_PRIMES: [u64; 3] = [2, 3, 5];
const SPECIALIZATION_ATTEMPTS: usize = 64;
/// Monic candidates tried per factorization before giving up on splitting
/// the remaining cofactor further.
const TRIAL_DIVISION_BUDGET: usize = 200_000;
const POLYGON_SEARCH_CAP: u64 = 2_000_000;
const SAMPLE_NUMERATOR_MAX: i64 = 100;
const SAMPLE_DENOMINATOR_MAX: i64 = 16;

fn ser_rational_points<S: serde::Serializer>(
    points: &[Vec<BigRational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = points
        .iter()
        .map(|p| p.iter().map(ToString::to_string).collect())
        .collect();
    strings.serialize(s)
}

/// Σ_σ sgn(σ) Π_i m[i][σ(i)], enumerated in Heap's order.
pub fn leibniz_determinant(m: &[Vec<SparsePoly>]) -> Result<SparsePoly> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Precondition(
            "empty matrix has no coefficient ring".into(),
        ));
    }
    if n > LEIBNIZ_MAX_N {
        return Err(Error::SizeCap(format!(
            "Leibniz expansion of a {n}x{n} matrix exceeds N = {LEIBNIZ_MAX_N}"
        )));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    let ring = m[0][0].ring();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut even = true;
    let product = |perm: &[usize]| {
        perm.iter()
            .enumerate()
            .fold(SparsePoly::one(ring), |acc, (i, &j)| &acc * &m[i][j])
    };
    let mut acc = product(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let swap_with = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(swap_with, i);
            even = !even;
            let term = product(&perm);
            acc = if even { &acc + &term } else { &acc - &term };
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalDivisibilityReport {
    pub content: Monomial,
    pub quotient: SparsePoly,
    pub remultiplied: bool,
}

/// For n = 1: V = content · Π_{i<j}(X_i1 − X_j1) · quotient, checked by
/// exact division and re-multiplication.
pub fn classical_divisibility_check(s: &Support) -> Result<ClassicalDivisibilityReport> {
    if s.n() != 1 {
        return Err(Error::Precondition(format!(
            "classical divisibility needs n = 1, got n = {}",
            s.n()
        )));
    }
    let inst = VandermondeInstance::new(s.clone(), Ring::Integers)?;
    let v = inst.determinant();
    let content = inst.content_monomial();
    let stripped = v.exact_divide(&SparsePoly::term(Ring::Integers, content.clone(), 1))?;
    let product = classical_product(Ring::Integers, s.len());
    let quotient = stripped.exact_divide(&product)?;
    let remultiplied = (&quotient * &product).mul_monomial(&content) == v;
    Ok(ClassicalDivisibilityReport {
        content,
        quotient,
        remultiplied,
    })
}

// Dense univariate polynomials over 𝔽_p, coefficients low to high, no
// trailing zeros.
mod fp {
    pub fn trim(mut f: Vec<u64>) -> Vec<u64> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Quotient by a monic divisor if the remainder is zero.
    pub fn div_exact_monic(f: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
        let dg = g.len() - 1;
        if f.len() < g.len() {
            return None;
        }
        let mut rem = f.to_vec();
        let mut q = vec![0; f.len() - dg];
        for k in (0..q.len()).rev() {
            let c = rem[k + dg];
            q[k] = c;
            if c != 0 {
                for (j, gj) in g.iter().enumerate() {
                    rem[k + j] = (rem[k + j] + (p - c) * gj % p) % p;
                }
            }
        }
        rem.iter().all(|&c| c == 0).then(|| trim(q))
    }

    pub fn inverse(a: u64, p: u64) -> u64 {
        (1..p)
            .find(|x| a * x % p == 1)
            .expect("nonzero residue mod a prime")
    }

    /// The monic polynomial of degree `d` whose lower coefficients are the
    /// base-p digits of `index`.
    pub fn monic_candidate(mut index: u64, d: usize, p: u64) -> Vec<u64> {
        let mut g = Vec::with_capacity(d + 1);
        for _ in 0..d {
            g.push(index % p);
            index /= p;
        }
        g.push(1);
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCaseReport {
    pub p: u64,
    /// Primitive direction w of the line; t stands for X_1^w.
    pub direction: Vec<i64>,
    /// Position k_ℓ of each γ_ℓ along the line: γ_ℓ = γ_base + k_ℓ w.
    pub positions: Vec<u64>,
    /// Residues substituted for rows 2..N, row-major.
    pub specialization: Vec<Vec<u64>>,
    pub attempts: usize,
    /// f(t), coefficients from t^0 upward.
    pub univariate: Vec<u64>,
    pub unit: u64,
    /// Monic factors of f; unit · Π factors = f.
    pub factors: Vec<Vec<u64>>,
}

impl LineCaseReport {
    pub fn degree(&self) -> usize {
        self.univariate.len().saturating_sub(1)
    }
}

/// Writes each γ_ℓ as base + k_ℓ·w with w primitive and every k_ℓ ≥ 0.
fn line_positions(s: &Support) -> (Vec<i64>, Vec<u64>) {
    let first = s.get(0);
    let far = (1..s.len())
        .max_by_key(|&i| {
            first
                .diff(s.get(i))
                .iter()
                .map(|d| d.abs())
                .max()
                .unwrap_or_default()
        })
        .expect("N >= 2");
    let diff = s.get(far).diff(first);
    let g = diff.iter().fold(BigInt::zero(), |acc, d| acc.gcd(d));
    let w: Vec<i64> = diff
        .iter()
        .map(|d| (d / &g).to_i64().expect("small direction"))
        .collect();
    let pivot = w.iter().position(|&c| c != 0).expect("nonzero direction");
    let raw: Vec<i64> = s
        .vectors()
        .iter()
        .map(|v| {
            let d = v.coords()[pivot] as i64 - first.coords()[pivot] as i64;
            d / w[pivot]
        })
        .collect();
    let min = *raw.iter().min().expect("nonempty");
    (w, raw.iter().map(|&k| (k - min) as u64).collect())
}

fn trial_factor(f: &[u64], p: u64) -> (u64, Vec<Vec<u64>>) {
    let unit = *f.last().expect("nonzero polynomial");
    let inv = fp::inverse(unit, p);
    let mut rem: Vec<u64> = f.iter().map(|c| c * inv % p).collect();
    let mut factors = Vec::new();
    let mut budget = TRIAL_DIVISION_BUDGET;
    let mut d = 1;
    'outer: while rem.len() > 2 * d {
        let count = p.checked_pow(d as u32).unwrap_or(u64::MAX);
        let mut index = 0;
        while index < count {
            if budget == 0 {
                break 'outer;
            }
            budget -= 1;
            let g = fp::monic_candidate(index, d, p);
            if let Some(q) = fp::div_exact_monic(&rem, &g, p) {
                factors.push(g);
                rem = q;
                if rem.len() <= 2 * d {
                    break;
                }
                continue;
            }
            index += 1;
        }
        d += 1;
    }
    if rem.len() > 1 {
        factors.push(rem);
    }
    (unit, factors)
}

/// Specializes rows 2..N of a collinear instance over 𝔽_p to random
/// residues, reads V as a univariate polynomial f(t) in t = X_1^w, and
/// factors f by trial division. Succeeds when f has at least two
/// nontrivial factors.
pub fn line_case_factor(inst: &VandermondeInstance, seed: u64) -> Result<LineCaseReport> {
    let p = match inst.ring() {
        Ring::PrimeField(p) if LINE_CASE_PRIMES.contains(&p) => p,
        other => {
            return Err(Error::Precondition(format!(
                "line-case factoring runs over F_2, F_3 or F_5, not {other}"
            )))
        }
    };
    let s = inst.support();
    if affine_dimension(s) != 1 {
        return Err(Error::Precondition(format!(
            "support is not collinear (affine dimension {})",
            affine_dimension(s)
        )));
    }
    if s.len() < 3 {
        return Err(Error::Precondition(
            "line-case factoring needs N >= 3".into(),
        ));
    }
    let (direction, positions) = line_positions(s);
    let degree = *positions.iter().max().expect("nonempty") as usize;
    if degree > LINE_CASE_MAX_DEGREE {
        return Err(Error::SizeCap(format!(
            "univariate degree {degree} exceeds {LINE_CASE_MAX_DEGREE}"
        )));
    }

    let matrix = inst.build_matrix();
    let minor_cols: Vec<usize> = (0..s.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=SPECIALIZATION_ATTEMPTS {
        let specialization: Vec<Vec<u64>> = (2..=s.len())
            .map(|_| (0..s.n()).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let values: BTreeMap<Var, BigInt> = specialization
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(c, &x)| (Var::grid(r + 2, c + 1), BigInt::from(x)))
            })
            .collect();
        let specialized: Vec<Vec<SparsePoly>> = matrix
            .iter()
            .enumerate()
            .map(|(r, row)| {
                if r == 0 {
                    row.clone()
                } else {
                    row.iter().map(|e| e.specialize(&values)).collect()
                }
            })
            .collect();
        let v = determinant(&specialized);
        let mut f = vec![0u64; degree + 1];
        for &l in &minor_cols {
            let c = v.coefficient(&row_monomial(1, s.get(l)));
            f[positions[l] as usize] = c.to_u64().expect("residue fits u64");
        }
        debug_assert_eq!(v.num_terms(), f.iter().filter(|&&c| c != 0).count());
        // Δ_N is the coefficient of X_1^{γ_N}.
        if f[positions[s.len() - 1] as usize] == 0 {
            continue;
        }
        let f = fp::trim(f);
        let (unit, factors) = trial_factor(&f, p);
        if factors.len() < 2 {
            continue;
        }
        let product = factors
            .iter()
            .fold(vec![unit], |acc, g| fp::mul(&acc, g, p));
        debug_assert_eq!(product, f);
        return Ok(LineCaseReport {
            p,
            direction,
            positions,
            specialization,
            attempts: attempt,
            univariate: f,
            unit,
            factors,
        });
    }
    Err(Error::SpecializationUnlucky(SPECIALIZATION_ATTEMPTS))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub trials: usize,
    pub achieved_rank: usize,
    pub target_rank: usize,
    /// Variables in the order used for sample coordinates.
    pub variables: Vec<String>,
    #[serde(serialize_with = "ser_rational_points")]
    pub sample_points: Vec<Vec<BigRational>>,
    pub singular_points: usize,
}

impl JacobianReport {
    pub fn conclusive(&self) -> bool {
        self.achieved_rank == self.target_rank
    }
}

/// Rank of the quotient-rule numerators ∂_v Δ_ℓ · Δ_N − Δ_ℓ · ∂_v Δ_N
/// (ℓ < N, v over rows 2..N) at seeded rational points with Δ_N ≠ 0.
/// Stops at the first point reaching rank N−1.
pub fn jacobian_independence_evidence(
    s: &Support,
    trials: usize,
    seed: u64,
) -> Result<JacobianReport> {
    if s.len() < 2 {
        return Err(Error::Precondition("Jacobian evidence needs N >= 2".into()));
    }
    let inst = VandermondeInstance::new(s.clone(), Ring::Integers)?;
    let size = s.len();
    let minors: Vec<SparsePoly> = (0..size)
        .map(|l| inst.minor_delta(l))
        .collect::<Result<_>>()?;
    let vars: Vec<Var> = (2..=size)
        .flat_map(|r| (1..=s.n()).map(move |c| Var::grid(r, c)))
        .collect();
    let last = &minors[size - 1];
    let last_partials: Vec<SparsePoly> = vars.iter().map(|&v| last.partial_derivative(v)).collect();
    let numerators: Vec<Vec<SparsePoly>> = minors[..size - 1]
        .iter()
        .map(|d| {
            vars.iter()
                .zip(&last_partials)
                .map(|(&v, dl)| &(&d.partial_derivative(v) * last) - &(d * dl))
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = JacobianReport {
        trials: 0,
        achieved_rank: 0,
        target_rank: size - 1,
        variables: vars.iter().map(ToString::to_string).collect(),
        sample_points: Vec::new(),
        singular_points: 0,
    };
    for _ in 0..trials {
        report.trials += 1;
        let coords: Vec<BigRational> = vars
            .iter()
            .map(|_| {
                BigRational::new(
                    rng.gen_range(-SAMPLE_NUMERATOR_MAX..=SAMPLE_NUMERATOR_MAX)
                        .into(),
                    rng.gen_range(1..=SAMPLE_DENOMINATOR_MAX).into(),
                )
            })
            .collect();
        let point: BTreeMap<Var, BigRational> =
            vars.iter().copied().zip(coords.iter().cloned()).collect();
        report.sample_points.push(coords);
        if last.evaluate(&point)?.is_zero() {
            report.singular_points += 1;
            continue;
        }
        let rows: Vec<Vec<BigRational>> = numerators
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.evaluate(&point).map(|x| x.to_rational()))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        report.achieved_rank = report
            .achieved_rank
            .max(crate::linalg::rational_rank(&rows));
        if report.conclusive() {
            break;
        }
    }
    if report.trials > 0 && report.singular_points == report.trials {
        return Err(Error::AllPointsSingular(report.trials));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PolygonVerdict {
    Decomposable,
    Indecomposable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonEdge {
    pub primitive: (i64, i64),
    pub length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonReport {
    pub verdict: PolygonVerdict,
    /// Counter-clockwise boundary of conv(Γ).
    pub edges: Vec<PolygonEdge>,
    /// Lengths a_i ≤ l_i of a proper summand, when one was found.
    pub summand: Option<Vec<u64>>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Hull vertices in counter-clockwise order, collinear points dropped.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A lattice polygon with primitive edge vectors v_i and lattice lengths
/// l_i has a proper lattice Minkowski summand iff some 0 ≤ a ≤ l with
/// a ∉ {0, l} satisfies Σ a_i v_i = 0. Exhaustive search over a.
pub fn polygon_indecomposability(s: &Support) -> Result<PolygonReport> {
    let unknown = PolygonReport {
        verdict: PolygonVerdict::Unknown,
        edges: Vec::new(),
        summand: None,
    };
    if s.n() != 2 {
        return Ok(unknown);
    }
    if affine_dimension(s) != 2 {
        return Err(Error::Precondition(format!(
            "Newton polygon needs affine dimension 2, got {}",
            affine_dimension(s)
        )));
    }
    let pts: Vec<(i64, i64)> = s
        .vectors()
        .iter()
        .map(|v| (v.coords()[0] as i64, v.coords()[1] as i64))
        .collect();
    let hull = convex_hull(pts);
    let edges: Vec<PolygonEdge> = (0..hull.len())
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let g = dx.gcd(&dy);
            PolygonEdge {
                primitive: (dx / g, dy / g),
                length: g as u64,
            }
        })
        .collect();
    let space = edges
        .iter()
        .try_fold(1u64, |acc, e| acc.checked_mul(e.length + 1))
        .filter(|&n| n <= POLYGON_SEARCH_CAP);
    let Some(space) = space else {
        return Ok(PolygonReport { edges, ..unknown });
    };
    let lengths: Vec<u64> = edges.iter().map(|e| e.length).collect();
    for index in 1..space - 1 {
        let mut rest = index;
        let mut a = Vec::with_capacity(edges.len());
        let (mut sx, mut sy) = (0i64, 0i64);
        for e in &edges {
            let k = rest % (e.length + 1);
            rest /= e.length + 1;
            sx += k as i64 * e.primitive.0;
            sy += k as i64 * e.primitive.1;
            a.push(k);
        }
        // index 0 is a = 0 and index space − 1 is a = l.
        if sx == 0 && sy == 0 && a != lengths {
            return Ok(PolygonReport {
                verdict: PolygonVerdict::Decomposable,
                edges,
                summand: Some(a),
            });
        }
    }
    Ok(PolygonReport {
        verdict: PolygonVerdict::Indecomposable,
        edges,
        summand: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(rows: &[&[u64]]) -> Support {
        Support::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn leibniz_small_cases() {
        let one = vec![vec![SparsePoly::var(Ring::Integers, Var::single(1))]];
        assert_eq!(leibniz_determinant(&one).unwrap(), one[0][0]);
        let c = |k: i64| SparsePoly::constant(Ring::Integers, k);
        let m = vec![
            vec![c(2), c(-1), c(0)],
            vec![c(1), c(3), c(4)],
            vec![c(0), c(5), c(-2)],
        ];
        assert_eq!(leibniz_determinant(&m).unwrap(), c(-54));
        let big = vec![vec![c(0); 9]; 9];
        assert!(matches!(leibniz_determinant(&big), Err(Error::SizeCap(_))));
    }

    #[test]
    fn leibniz_agrees_with_memoized_determinant() {
        let s = sup(&[&[0, 1], &[2, 0], &[1, 1], &[3, 2]]);
        let inst = VandermondeInstance::new(s, Ring::Integers).unwrap();
        assert_eq!(
            leibniz_determinant(&inst.build_matrix()).unwrap(),
            inst.determinant()
        );
    }

    #[test]
    fn classical_examples() {
        let r = classical_divisibility_check(&sup(&[&[0], &[1], &[2]])).unwrap();
        assert!(r.remultiplied && r.content.is_one());
        assert_eq!(r.quotient, -&SparsePoly::one(Ring::Integers));

        // Γ = (0,2,3): V / Π(X_i − X_j) is −(X_1X_2 + X_1X_3 + X_2X_3).
        let r = classical_divisibility_check(&sup(&[&[0], &[2], &[3]])).unwrap();
        assert!(r.remultiplied);
        assert_eq!(r.quotient.num_terms(), 3);
        assert_eq!(r.quotient.total_degree(), Some(2));

        let r = classical_divisibility_check(&sup(&[&[1], &[2], &[4]])).unwrap();
        assert_eq!(r.content.degree(), 3);
        assert!(r.remultiplied);

        assert!(classical_divisibility_check(&sup(&[&[0, 1], &[1, 0]])).is_err());
    }

    #[test]
    fn line_case_examples() {
        let diag = sup(&[&[0, 0], &[1, 1], &[2, 2]]);
        let inst = VandermondeInstance::new(diag, Ring::prime_field(3).unwrap()).unwrap();
        let r = line_case_factor(&inst, 0).unwrap();
        assert_eq!(r.direction, vec![1, 1]);
        assert_eq!(r.degree(), 2);
        assert!(r.factors.len() >= 2);

        let classical = sup(&[&[0], &[1], &[2]]);
        let inst = VandermondeInstance::new(classical, Ring::prime_field(2).unwrap()).unwrap();
        let r = line_case_factor(&inst, 0).unwrap();
        assert!(r.factors.iter().all(|g| g.len() == 2));

        // Direction with mixed signs: t = X_1^{(1,−1)} is Laurent.
        let anti = sup(&[&[3, 0], &[2, 1], &[0, 3], &[1, 2]]);
        let inst = VandermondeInstance::new(anti, Ring::prime_field(5).unwrap()).unwrap();
        let r = line_case_factor(&inst, 4).unwrap();
        assert_eq!(r.direction, vec![-1, 1]);
        assert_eq!(r.positions, vec![0, 1, 3, 2]);
        assert!(r.factors.len() >= 2);

        let triangle = sup(&[&[1, 0], &[0, 1], &[1, 1]]);
        let inst = VandermondeInstance::new(triangle, Ring::prime_field(5).unwrap()).unwrap();
        assert!(matches!(
            line_case_factor(&inst, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn line_case_rejects_other_rings() {
        let s = sup(&[&[0], &[1], &[2]]);
        let inst = VandermondeInstance::new(s, Ring::Integers).unwrap();
        assert!(matches!(
            line_case_factor(&inst, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn factoring_over_small_fields() {
        // t^2 + 1 is irreducible over F_3, as is 2t^2 + 4 = 2(t^2 + 2) over F_5.
        assert_eq!(trial_factor(&[1, 0, 1], 3).1.len(), 1);
        assert_eq!(trial_factor(&[4, 0, 2], 5).1, vec![vec![2, 0, 1]]);
        let (unit, factors) = trial_factor(&[3, 0, 2], 5);
        assert_eq!(unit, 2);
        assert_eq!(factors, vec![vec![1, 1], vec![4, 1]]);
    }

    #[test]
    fn jacobian_examples() {
        let r = jacobian_independence_evidence(&sup(&[&[0], &[1], &[2]]), 3, 0).unwrap();
        assert_eq!((r.achieved_rank, r.target_rank), (2, 2));
        let r = jacobian_independence_evidence(&sup(&[&[0, 1], &[1, 0]]), 3, 0).unwrap();
        assert!(r.conclusive() && r.target_rank == 1);
        let r = jacobian_independence_evidence(&sup(&[&[2, 0], &[0, 2], &[2, 2]]), 3, 0).unwrap();
        assert!(r.conclusive());
        assert_eq!(r.sample_points.len(), r.trials);
    }

    #[test]
    fn jacobian_reports_singular_samples() {
        // Δ_N = X_21 here, which vanishes only at 0.
        let r = jacobian_independence_evidence(&sup(&[&[1], &[0]]), 5, 9).unwrap();
        assert_eq!(r.singular_points, 0);
        assert!(matches!(
            jacobian_independence_evidence(&sup(&[&[1]]), 3, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn polygon_examples() {
        let r = polygon_indecomposability(&sup(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(r.verdict, PolygonVerdict::Indecomposable);
        assert_eq!(r.edges.len(), 3);

        let r = polygon_indecomposability(&sup(&[&[0, 0], &[2, 0], &[0, 2]])).unwrap();
        assert_eq!(r.verdict, PolygonVerdict::Decomposable);
        assert_eq!(r.summand, Some(vec![1, 1, 1]));

        // Unit square = horizontal segment + vertical segment.
        let r = polygon_indecomposability(&sup(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(r.verdict, PolygonVerdict::Decomposable);

        // Interior points do not change the hull.
        let r = polygon_indecomposability(&sup(&[&[0, 0], &[3, 1], &[1, 3], &[1, 1], &[2, 2]]))
            .unwrap();
        assert_eq!(r.verdict, PolygonVerdict::Indecomposable);

        assert!(polygon_indecomposability(&sup(&[&[0, 0], &[1, 1], &[2, 2]])).is_err());
        assert_eq!(
            polygon_indecomposability(&sup(&[&[0], &[1]]))
                .unwrap()
                .verdict,
            PolygonVerdict::Unknown
        );
    }
}
