//! Regular subdivisions of conv(Γ) induced by a perturbed paraboloid
//! lifting, their edge multiplicities and ridge structure, and the tropical
//! irreducibility decision built on them.
//!
//! The tropical hypersurface itself is never materialized: everything is
//! read off the dual subdivision. Edges of the subdivision are dual to
//! facets, triangles are dual to ridges, and an edge's lattice length is
//! the multiplicity of its facet.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{
    affine_dimension, componentwise_min, d_gamma, normalize, reduce_to_span_coordinates,
    SpanTransform, Support,
};
use crate::linalg::{gcd_all, rational_rank, solve_rational};

pub const DEFAULT_RETRIES: usize = 32;
/// Largest affine dimension handled by witness enumeration.
pub const MAX_SPAN_DIM: usize = 3;
/// Perturbation numerators are drawn from `1..=EPSILON_NUMERATOR_MAX`.
pub const EPSILON_NUMERATOR_MAX: u64 = 1 << 16;
pub const EPSILON_DENOMINATOR: u64 = 1 << 40;
const COVERAGE_SAMPLES: usize = 24;

fn ser_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_rationals<S: serde::Serializer>(
    qs: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(ToString::to_string))
}

fn point(s: &Support, i: usize) -> Vec<BigRational> {
    s.get(i)
        .coords()
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

fn int_point(s: &Support, i: usize) -> Vec<BigInt> {
    s.get(i).coords().iter().map(|&c| BigInt::from(c)).collect()
}

/// Height assigned to each point of Γ (0-based index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lifting {
    #[serde(serialize_with = "ser_rationals")]
    pub values: Vec<BigRational>,
    /// Which perturbation draw produced this lifting (0 = first).
    pub attempt: usize,
}

impl Lifting {
    pub fn new(values: Vec<BigRational>) -> Self {
        Lifting { values, attempt: 0 }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Lifting::new(
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }
}

/// Σ_j ((γ_ij + ε_ij)² − γ_Nj²) for every i.
pub fn paraboloid_lift(s: &Support, epsilon: &[Vec<BigRational>]) -> Lifting {
    let last = point(s, s.len() - 1);
    let offset: BigRational = last.iter().map(|c| c * c).sum();
    let values = (0..s.len())
        .map(|i| {
            let total: BigRational = point(s, i)
                .iter()
                .zip(&epsilon[i])
                .map(|(g, e)| {
                    let shifted = g + e;
                    &shifted * &shifted
                })
                .sum();
            total - &offset
        })
        .collect();
    Lifting::new(values)
}

fn draw_epsilon(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<BigRational>> {
    let den = BigInt::from(EPSILON_DENOMINATOR);
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    let num = rng.gen_range(1..=EPSILON_NUMERATOR_MAX);
                    BigRational::new(BigInt::from(num), den.clone())
                })
                .collect()
        })
        .collect()
}

fn require_full_dimensional(s: &Support) -> Result<()> {
    let dim = affine_dimension(s);
    if dim < 1 {
        return Err(Error::DegenerateSupport(
            "subdivisions need affine dimension at least 1".into(),
        ));
    }
    if dim != s.n() {
        return Err(Error::Precondition(format!(
            "support spans dimension {dim} inside Z^{}; reduce to span coordinates first",
            s.n()
        )));
    }
    if dim > MAX_SPAN_DIM {
        return Err(Error::SizeCap(format!(
            "affine dimension {dim} exceeds {MAX_SPAN_DIM}"
        )));
    }
    Ok(())
}

/// Seeded perturbed paraboloid lifting; redrawn until the induced
/// subdivision is a triangulation.
pub fn delaunay_lifting(s: &Support, seed: u64) -> Result<Lifting> {
    delaunay_triangulation(s, seed, DEFAULT_RETRIES).map(|(l, _)| l)
}

/// As [`delaunay_lifting`], also returning the triangulation it induces.
pub fn delaunay_triangulation(
    s: &Support,
    seed: u64,
    retries: usize,
) -> Result<(Lifting, RegularSubdivision)> {
    if s.len() < 2 {
        return Err(Error::DegenerateSupport("lifting needs N >= 2".into()));
    }
    require_full_dimensional(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..retries.max(1) {
        let eps = draw_epsilon(&mut rng, s.len(), s.n());
        let mut lifting = paraboloid_lift(s, &eps);
        lifting.attempt = attempt;
        let sub = regular_subdivision(s, &lifting)?;
        if sub.simplicial {
            return Ok((lifting, sub));
        }
    }
    Err(Error::PerturbationExhausted(retries.max(1)))
}

/// A maximal cell: the points whose lifts lie on the affine function
/// `x ↦ a·x + b`, with every other lifted point strictly above it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub vertices: Vec<usize>,
    #[serde(serialize_with = "ser_rationals")]
    pub normal: Vec<BigRational>,
    #[serde(serialize_with = "ser_rational")]
    pub offset: BigRational,
}

impl Cell {
    fn height_at(&self, x: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, c)| a * c)
            .sum::<BigRational>()
            + &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularSubdivision {
    pub ambient_dim: usize,
    pub cells: Vec<Cell>,
    pub simplicial: bool,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Affine function through the lifted points of `subset`, if they are
/// affinely independent.
fn interpolate(
    points: &[Vec<BigRational>],
    lifting: &Lifting,
    subset: &[usize],
) -> Option<(Vec<BigRational>, BigRational)> {
    let rows: Vec<Vec<BigRational>> = subset
        .iter()
        .map(|&i| {
            let mut r = points[i].clone();
            r.push(BigRational::one());
            r
        })
        .collect();
    let rhs: Vec<BigRational> = subset.iter().map(|&i| lifting.values[i].clone()).collect();
    let mut sol = solve_rational(&rows, &rhs)?;
    let offset = sol.pop().expect("system has m + 1 unknowns");
    Some((sol, offset))
}

/// Brute-force lower hull: every affinely independent (m+1)-subset whose
/// interpolating affine function lies weakly below all lifted points spans
/// a lower face; the cell is every point on that function.
pub fn regular_subdivision(s: &Support, lifting: &Lifting) -> Result<RegularSubdivision> {
    require_full_dimensional(s)?;
    if lifting.values.len() != s.len() {
        return Err(Error::Precondition(format!(
            "lifting has {} values for {} points",
            lifting.values.len(),
            s.len()
        )));
    }
    let m = s.n();
    let points: Vec<Vec<BigRational>> = (0..s.len()).map(|i| point(s, i)).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cells = Vec::new();
    for subset in combinations(s.len(), m + 1) {
        let Some((normal, offset)) = interpolate(&points, lifting, &subset) else {
            continue;
        };
        let mut on_plane = Vec::new();
        let mut below_all = true;
        for (t, x) in points.iter().enumerate() {
            let h: BigRational = normal
                .iter()
                .zip(x)
                .map(|(a, c)| a * c)
                .sum::<BigRational>()
                + &offset;
            let gap = &lifting.values[t] - h;
            if gap.is_negative() {
                below_all = false;
                break;
            }
            if gap.is_zero() {
                on_plane.push(t);
            }
        }
        if below_all && seen.insert(on_plane.clone()) {
            cells.push(Cell {
                vertices: on_plane,
                normal,
                offset,
            });
        }
    }
    let simplicial = cells.iter().all(|c| c.vertices.len() == m + 1);
    Ok(RegularSubdivision {
        ambient_dim: m,
        cells,
        simplicial,
    })
}

impl RegularSubdivision {
    /// Every witness interpolates its cell exactly and is strictly below
    /// every lifted point outside it.
    pub fn validate_witnesses(
        &self,
        s: &Support,
        lifting: &Lifting,
    ) -> std::result::Result<(), String> {
        for (k, cell) in self.cells.iter().enumerate() {
            for t in 0..s.len() {
                let gap = &lifting.values[t] - cell.height_at(&point(s, t));
                let inside = cell.vertices.contains(&t);
                if inside && !gap.is_zero() {
                    return Err(format!("cell {k}: witness misses vertex {t}"));
                }
                if !inside && !gap.is_positive() {
                    return Err(format!(
                        "cell {k}: point {t} is not strictly above the witness"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn used_vertices(&self) -> BTreeSet<usize> {
        self.cells
            .iter()
            .flat_map(|c| c.vertices.iter().copied())
            .collect()
    }

    /// Samples rational points of conv(Γ) and checks each lies in some cell.
    pub fn covers_hull(&self, s: &Support, seed: u64) -> bool {
        let m = self.ambient_dim;
        let points: Vec<Vec<BigRational>> = (0..s.len()).map(|i| point(s, i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x636f_7665_7261_6765);
        (0..COVERAGE_SAMPLES).all(|_| {
            let weights: Vec<u64> = (0..s.len()).map(|_| rng.gen_range(0..=16)).collect();
            let total: u64 = weights.iter().sum::<u64>().max(1);
            let sample: Vec<BigRational> = (0..m)
                .map(|j| {
                    points
                        .iter()
                        .zip(&weights)
                        .map(|(p, &w)| &p[j] * BigInt::from(w))
                        .sum::<BigRational>()
                        / BigInt::from(total)
                })
                .collect();
            let sample = if weights.iter().all(|&w| w == 0) {
                points[0].clone()
            } else {
                sample
            };
            self.cells
                .iter()
                .any(|c| cell_contains(&points, &c.vertices, &sample, m))
        })
    }
}

/// Point-in-cell by barycentric coordinates over the cell's simplices.
fn cell_contains(
    points: &[Vec<BigRational>],
    vertices: &[usize],
    x: &[BigRational],
    m: usize,
) -> bool {
    combinations(vertices.len(), m + 1).into_iter().any(|idx| {
        let simplex: Vec<usize> = idx.iter().map(|&i| vertices[i]).collect();
        // Solve Σ λ_k p_k = x, Σ λ_k = 1.
        let mut rows: Vec<Vec<BigRational>> = (0..m)
            .map(|j| simplex.iter().map(|&v| points[v][j].clone()).collect())
            .collect();
        rows.push(vec![BigRational::one(); m + 1]);
        let mut rhs = x.to_vec();
        rhs.push(BigRational::one());
        solve_rational(&rows, &rhs).is_some_and(|lambda| lambda.iter().all(|l| !l.is_negative()))
    })
}

/// An edge of the subdivision, dual to a facet of the tropical hypersurface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub edge: (usize, usize),
    pub multiplicity: u64,
}

/// A triangle of the subdivision, dual to a ridge; `facets` index into
/// [`TropicalCombinatorics::facets`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ridge {
    pub triangle: [usize; 3],
    pub facets: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TropicalCombinatorics {
    pub facets: Vec<Facet>,
    pub ridges: Vec<Ridge>,
    /// Adjacency lists: two facets are adjacent iff they bound a common ridge.
    pub facet_graph: Vec<Vec<usize>>,
}

impl TropicalCombinatorics {
    pub fn multiplicity_gcd(&self) -> u64 {
        self.facets
            .iter()
            .fold(0u64, |acc, f| acc.gcd(&f.multiplicity))
    }
}

pub fn combinatorics(sub: &RegularSubdivision, s: &Support) -> Result<TropicalCombinatorics> {
    if !sub.simplicial {
        return Err(Error::NotSimplicial);
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut triangles: BTreeSet<[usize; 3]> = BTreeSet::new();
    for cell in &sub.cells {
        for pair in combinations(cell.vertices.len(), 2) {
            edges.insert((cell.vertices[pair[0]], cell.vertices[pair[1]]));
        }
        if cell.vertices.len() >= 3 {
            for t in combinations(cell.vertices.len(), 3) {
                triangles.insert([
                    cell.vertices[t[0]],
                    cell.vertices[t[1]],
                    cell.vertices[t[2]],
                ]);
            }
        }
    }
    let index: BTreeMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let facets: Vec<Facet> = edges
        .iter()
        .map(|&(a, b)| {
            let diff: Vec<BigInt> = int_point(s, b)
                .iter()
                .zip(int_point(s, a))
                .map(|(x, y)| x - y)
                .collect();
            Facet {
                edge: (a, b),
                multiplicity: gcd_all(diff.iter())
                    .to_u64()
                    .expect("lattice length fits u64"),
            }
        })
        .collect();
    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); facets.len()];
    let ridges: Vec<Ridge> = triangles
        .into_iter()
        .map(|[a, b, c]| {
            let ids = [index[&(a, b)], index[&(b, c)], index[&(a, c)]];
            for &i in &ids {
                for &j in &ids {
                    if i != j {
                        adjacency[i].insert(j);
                    }
                }
            }
            Ridge {
                triangle: [a, b, c],
                facets: ids,
            }
        })
        .collect();
    Ok(TropicalCombinatorics {
        facets,
        ridges,
        facet_graph: adjacency
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancingReport {
    pub balanced: bool,
    pub ridges_checked: usize,
    /// Every ridge's three edge directions are pairwise non-parallel.
    pub pairwise_independent: bool,
    pub failing_ridge: Option<[usize; 3]>,
}

/// Around each triangle a→b→c→a, each oriented edge equals multiplicity ×
/// primitive vector and the three weighted primitive vectors sum to zero.
pub fn balancing_check(tc: &TropicalCombinatorics, s: &Support) -> BalancingReport {
    let mut pairwise_independent = true;
    for ridge in &tc.ridges {
        let [a, b, c] = ridge.triangle;
        let oriented = [
            (a, b, ridge.facets[0]),
            (b, c, ridge.facets[1]),
            (c, a, ridge.facets[2]),
        ];
        let mut sum = vec![BigInt::zero(); s.n()];
        let mut primitives = Vec::with_capacity(3);
        let mut ok = true;
        for (from, to, facet) in oriented {
            let diff: Vec<BigInt> = int_point(s, to)
                .iter()
                .zip(int_point(s, from))
                .map(|(x, y)| x - y)
                .collect();
            let mult = BigInt::from(tc.facets[facet].multiplicity);
            let primitive: Vec<BigInt> = diff.iter().map(|d| d / &mult).collect();
            ok &= gcd_all(primitive.iter()).is_one();
            ok &= primitive.iter().zip(&diff).all(|(p, d)| p * &mult == *d);
            for (acc, p) in sum.iter_mut().zip(&primitive) {
                *acc += p * &mult;
            }
            primitives.push(primitive);
        }
        ok &= sum.iter().all(Zero::is_zero);
        for i in 0..3 {
            for j in i + 1..3 {
                let pair: Vec<Vec<BigRational>> = [&primitives[i], &primitives[j]]
                    .iter()
                    .map(|v| {
                        v.iter()
                            .map(|x| BigRational::from_integer(x.clone()))
                            .collect()
                    })
                    .collect();
                pairwise_independent &= rational_rank(&pair) == 2;
            }
        }
        if !ok {
            return BalancingReport {
                balanced: false,
                ridges_checked: tc.ridges.len(),
                pairwise_independent,
                failing_ridge: Some(ridge.triangle),
            };
        }
    }
    BalancingReport {
        balanced: true,
        ridges_checked: tc.ridges.len(),
        pairwise_independent,
        failing_ridge: None,
    }
}

/// Breadth-first connectivity of the facet graph.
pub fn is_ridge_connected(tc: &TropicalCombinatorics) -> bool {
    if tc.facets.is_empty() {
        return true;
    }
    let mut seen = vec![false; tc.facets.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for &g in &tc.facet_graph[f] {
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TropicalVerdict {
    Irreducible,
    Reducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub statement: &'static str,
    pub holds: bool,
    pub detail: String,
}

/// The Delaunay triangulation of the normalized support in span
/// coordinates, with everything derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TropicalWitness {
    pub reduced_support: Support,
    pub transform: SpanTransform,
    pub lifting: Lifting,
    pub subdivision: RegularSubdivision,
    pub combinatorics: TropicalCombinatorics,
    pub balancing: BalancingReport,
    pub witnesses_valid: bool,
    pub all_vertices_present: bool,
    pub covers_hull: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TropicalCertificate {
    pub verdict: TropicalVerdict,
    pub seed: u64,
    pub conditions: Vec<Condition>,
    pub ridge_connected: Option<bool>,
    pub multiplicity_gcd: Option<u64>,
    pub witness: Option<TropicalWitness>,
}

/// Builds the full witness for a support with N ≥ 2 and affine dimension
/// in 1..=3.
pub fn build_witness(s: &Support, seed: u64) -> Result<TropicalWitness> {
    let (normalized, _) = normalize(s);
    let (reduced, transform) = reduce_to_span_coordinates(&normalized)?;
    let (lifting, subdivision) = delaunay_triangulation(&reduced, seed, DEFAULT_RETRIES)?;
    let witnesses_valid = subdivision.validate_witnesses(&reduced, &lifting).is_ok();
    let all_vertices_present = subdivision.used_vertices().len() == reduced.len();
    let covers_hull = subdivision.covers_hull(&reduced, seed);
    let combinatorics = combinatorics(&subdivision, &reduced)?;
    let balancing = balancing_check(&combinatorics, &reduced);
    Ok(TropicalWitness {
        reduced_support: reduced,
        transform,
        lifting,
        subdivision,
        combinatorics,
        balancing,
        witnesses_valid,
        all_vertices_present,
        covers_hull,
    })
}

pub fn decide_tropical_irreducibility(s: &Support, seed: u64) -> Result<TropicalCertificate> {
    let dim = affine_dimension(s);
    let gamma_bar = componentwise_min(s);
    let d = if s.len() >= 2 {
        Some(d_gamma(s)?)
    } else {
        None
    };
    let conditions = vec![
        Condition {
            statement: "dim(L_Γ) ≥ 2",
            holds: dim >= 2,
            detail: format!("affine dimension {dim}"),
        },
        Condition {
            statement: "γ̄ = 0",
            holds: gamma_bar.is_zero(),
            detail: format!("γ̄ = {gamma_bar}"),
        },
        Condition {
            statement: "d_Γ = 1",
            holds: d == Some(1),
            detail: match d {
                Some(d) => format!("d_Γ = {d}"),
                None => "d_Γ undefined for N = 1".into(),
            },
        },
    ];
    let all_hold = conditions.iter().all(|c| c.holds);

    let witness = if s.len() >= 2 && (dim <= MAX_SPAN_DIM || all_hold) {
        Some(build_witness(s, seed)?)
    } else {
        None
    };
    let ridge_connected = witness
        .as_ref()
        .map(|w| is_ridge_connected(&w.combinatorics));
    let multiplicity_gcd = witness.as_ref().map(|w| w.combinatorics.multiplicity_gcd());

    if let Some(w) = &witness {
        if !w.witnesses_valid || !w.all_vertices_present || !w.balancing.balanced {
            return Err(Error::WitnessFailure(
                "Delaunay witness violates its own invariants".into(),
            ));
        }
    }
    if all_hold {
        if ridge_connected != Some(true) {
            return Err(Error::WitnessFailure(
                "facet graph is not ridge-connected".into(),
            ));
        }
        if multiplicity_gcd != Some(1) {
            return Err(Error::WitnessFailure(format!(
                "edge multiplicities share the factor {multiplicity_gcd:?}"
            )));
        }
    }
    Ok(TropicalCertificate {
        verdict: if all_hold {
            TropicalVerdict::Irreducible
        } else {
            TropicalVerdict::Reducible
        },
        seed,
        conditions,
        ridge_connected,
        multiplicity_gcd,
        witness,
    })
}
