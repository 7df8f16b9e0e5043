//! The generalized Vandermonde matrix `(X_i^{γ_ℓ})`, its determinant and
//! the first-row cofactor expansion.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exponents::{componentwise_min, normalize, ExponentVector, Support};
use crate::poly::{Monomial, Ring, SparsePoly, Var};

/// Largest N for which determinants are expanded.
pub const MAX_N: usize = 12;

pub type PolyMatrix = Vec<Vec<SparsePoly>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeInstance {
    support: Support,
    ring: Ring,
}

/// `X_row^γ` on the variable grid; `row` is 1-based.
pub fn row_monomial(row: usize, gamma: &ExponentVector) -> Monomial {
    Monomial::from_pairs(gamma.coords().iter().enumerate().map(|(j, &e)| {
        (
            Var::grid(row, j + 1),
            u32::try_from(e).expect("exponent fits u32"),
        )
    }))
}

/// Renames row `from` of the variable grid to row `to`.
pub fn substitute_row(p: &SparsePoly, from: usize, to: usize) -> SparsePoly {
    p.map_vars(|v| match v {
        Var::Grid { row, col } if row as usize == from => Var::grid(to, col as usize),
        other => other,
    })
}

impl VandermondeInstance {
    pub fn new(support: Support, ring: Ring) -> Result<Self> {
        if support.len() > MAX_N {
            return Err(Error::SizeCap(format!(
                "N = {} exceeds the determinant cap {MAX_N}",
                support.len()
            )));
        }
        if support.max_exponent() > u64::from(u32::MAX) / (MAX_N as u64) {
            return Err(Error::SizeCap("exponents too large".into()));
        }
        Ok(VandermondeInstance { support, ring })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// N, the number of rows and columns.
    pub fn size(&self) -> usize {
        self.support.len()
    }

    /// Entry (i, ℓ) is the single monomial `X_i^{γ_ℓ}`.
    pub fn build_matrix(&self) -> PolyMatrix {
        (1..=self.size())
            .map(|row| {
                self.support
                    .vectors()
                    .iter()
                    .map(|g| SparsePoly::term(self.ring, row_monomial(row, g), 1))
                    .collect()
            })
            .collect()
    }

    pub fn determinant(&self) -> SparsePoly {
        determinant(&self.build_matrix())
    }

    /// Δ_ℓ: the minor deleting the first row and column `col` (0-based).
    pub fn minor_delta(&self, col: usize) -> Result<SparsePoly> {
        let n = self.size();
        if n < 2 || col >= n {
            return Err(Error::IndexOutOfRange { index: col, len: n });
        }
        Ok(first_row_minors(&self.build_matrix()).swap_remove(col))
    }

    pub fn row_expansion(&self) -> Result<RowExpansion> {
        let n = self.size();
        if n < 2 {
            return Err(Error::Precondition(
                "row expansion needs at least two rows".into(),
            ));
        }
        let minors = first_row_minors(&self.build_matrix());
        let signs = (0..n).map(|l| (l % 2) as u8).collect();
        let expansion = RowExpansion {
            support: self.support.clone(),
            signs,
            minors,
        };
        let det = self.determinant();
        assert_eq!(
            expansion.reassemble(1),
            det,
            "first-row expansion must reassemble the determinant"
        );
        Ok(expansion)
    }

    /// Π_{r=1..N} X_r^{γ̄}: the monomial factor forced by a nonzero minimum.
    pub fn content_monomial(&self) -> Monomial {
        let min = componentwise_min(&self.support);
        (1..=self.size()).fold(Monomial::one(), |acc, r| acc.mul(&row_monomial(r, &min)))
    }

    /// The instance on the translated support Γ − γ̄.
    pub fn normalized(&self) -> VandermondeInstance {
        VandermondeInstance {
            support: normalize(&self.support).0,
            ring: self.ring,
        }
    }
}

/// V = Σ_ℓ (−1)^{σ_ℓ} Δ_ℓ X_1^{γ_ℓ} with σ_ℓ = ℓ mod 2 for 0-based ℓ
/// (the usual cofactor sign).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowExpansion {
    support: Support,
    pub signs: Vec<u8>,
    pub minors: Vec<SparsePoly>,
}

impl RowExpansion {
    /// Σ_ℓ (−1)^{σ_ℓ} Δ_ℓ X_row^{γ_ℓ}. For `row = 1` this is V itself; for
    /// any other row it is the determinant with a repeated row, i.e. zero.
    pub fn reassemble(&self, row: usize) -> SparsePoly {
        let ring = self.minors[0].ring();
        let mut acc = SparsePoly::zero(ring);
        for ((gamma, sign), minor) in self
            .support
            .vectors()
            .iter()
            .zip(&self.signs)
            .zip(&self.minors)
        {
            let term = minor.mul_monomial(&row_monomial(row, gamma));
            acc = if *sign == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }
}

/// Determinant of a square polynomial matrix by first-row cofactor
/// expansion, memoized over column subsets (2^N minors).
pub fn determinant(m: &[Vec<SparsePoly>]) -> SparsePoly {
    let n = m.len();
    assert!(
        m.iter().all(|r| r.len() == n),
        "determinant of a non-square matrix"
    );
    assert!(n <= 24, "matrix too large for subset memoization");
    if n == 0 {
        return SparsePoly::one(Ring::Integers);
    }
    let minors = first_row_minors(m);
    let mut det = SparsePoly::zero(m[0][0].ring());
    for (l, minor) in minors.iter().enumerate() {
        let term = &m[0][l] * minor;
        det = if l % 2 == 0 {
            &det + &term
        } else {
            &det - &term
        };
    }
    det
}

/// The minors Δ_ℓ deleting row 0 and column ℓ, for every ℓ.
fn first_row_minors(m: &[Vec<SparsePoly>]) -> Vec<SparsePoly> {
    let n = m.len();
    let ring = m[0][0].ring();
    let full: usize = (1 << n) - 1;
    if n == 1 {
        return vec![SparsePoly::one(ring)];
    }
    // table[mask] = minor on rows (n - |mask|)..n and the columns in mask.
    let mut table: Vec<Option<SparsePoly>> = vec![None; 1 << n];
    table[0] = Some(SparsePoly::one(ring));
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for mask in 1..=full {
        by_size[mask.count_ones() as usize].push(mask);
    }
    for size in 1..n {
        let row = n - size;
        for &mask in &by_size[size] {
            let mut acc = SparsePoly::zero(ring);
            for (k, col) in (0..n).filter(|c| mask & (1 << c) != 0).enumerate() {
                let sub = table[mask & !(1 << col)]
                    .as_ref()
                    .expect("smaller minors are filled");
                if sub.is_zero() || m[row][col].is_zero() {
                    continue;
                }
                let term = &m[row][col] * sub;
                acc = if k % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            table[mask] = Some(acc);
        }
        // Minors two sizes down are no longer needed.
        if size >= 2 {
            for &mask in &by_size[size - 2] {
                table[mask] = None;
            }
        }
    }
    (0..n)
        .map(|l| {
            table[full & !(1 << l)]
                .take()
                .expect("all (N-1)-minors computed")
        })
        .collect()
}

/// Classical Vandermonde product Π_{i<j} (X_{i1} − X_{j1}) for n = 1.
pub fn classical_product(ring: Ring, size: usize) -> SparsePoly {
    let mut acc = SparsePoly::one(ring);
    for i in 1..=size {
        for j in i + 1..=size {
            let diff = SparsePoly::from_terms(
                ring,
                [
                    (Monomial::var(Var::grid(i, 1)), BigInt::from(1)),
                    (Monomial::var(Var::grid(j, 1)), BigInt::from(-1)),
                ],
            );
            acc = &acc * &diff;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZZ: Ring = Ring::Integers;

    fn inst(rows: &[&[u64]], ring: Ring) -> VandermondeInstance {
        let s = Support::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        VandermondeInstance::new(s, ring).unwrap()
    }

    fn x(i: usize, j: usize) -> Var {
        Var::grid(i, j)
    }

    fn mono(pairs: &[(Var, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    fn poly(terms: &[(i64, &[(Var, u32)])]) -> SparsePoly {
        SparsePoly::from_terms(ZZ, terms.iter().map(|(c, m)| (mono(m), BigInt::from(*c))))
    }

    /// The six signed terms printed for Γ = ((2,0),(0,2),(2,2)).
    pub(crate) fn even_triangle_expected() -> SparsePoly {
        poly(&[
            (1, &[(x(1, 1), 2), (x(2, 2), 2), (x(3, 1), 2), (x(3, 2), 2)]),
            (
                -1,
                &[(x(1, 1), 2), (x(3, 2), 2), (x(2, 1), 2), (x(2, 2), 2)],
            ),
            (
                -1,
                &[(x(1, 2), 2), (x(2, 1), 2), (x(3, 1), 2), (x(3, 2), 2)],
            ),
            (1, &[(x(1, 2), 2), (x(3, 1), 2), (x(2, 1), 2), (x(2, 2), 2)]),
            (1, &[(x(1, 1), 2), (x(1, 2), 2), (x(2, 1), 2), (x(3, 2), 2)]),
            (
                -1,
                &[(x(1, 1), 2), (x(1, 2), 2), (x(3, 1), 2), (x(2, 2), 2)],
            ),
        ])
    }

    #[test]
    fn matrix_shape_examples() {
        let m = inst(&[&[0], &[1], &[2]], ZZ).build_matrix();
        for (i, row) in m.iter().enumerate() {
            let r = i + 1;
            assert_eq!(row[0], SparsePoly::one(ZZ));
            assert_eq!(row[1], poly(&[(1, &[(x(r, 1), 1)])]));
            assert_eq!(row[2], poly(&[(1, &[(x(r, 1), 2)])]));
        }
        let m = inst(&[&[2, 0], &[0, 2], &[2, 2]], ZZ).build_matrix();
        assert_eq!(m[0][2], poly(&[(1, &[(x(1, 1), 2), (x(1, 2), 2)])]));
        let m = inst(&[&[4]], ZZ).build_matrix();
        assert_eq!(m, vec![vec![poly(&[(1, &[(x(1, 1), 4)])])]]);
    }

    #[test]
    fn even_triangle_determinant() {
        let v = inst(&[&[2, 0], &[0, 2], &[2, 2]], ZZ).determinant();
        assert_eq!(v, even_triangle_expected());
        assert_eq!(v.num_terms(), 6);
        assert!(v.terms().all(|(m, _)| m.degree() == 8));
    }

    #[test]
    fn classical_three_by_three() {
        let v = inst(&[&[0], &[1], &[2]], ZZ).determinant();
        // (X21 − X11)(X31 − X11)(X31 − X21)
        let d = |a: usize, b: usize| poly(&[(1, &[(x(a, 1), 1)]), (-1, &[(x(b, 1), 1)])]);
        let expected = &(&d(2, 1) * &d(3, 1)) * &d(3, 2);
        assert_eq!(v, expected);
        assert_eq!(v, -&classical_product(ZZ, 3));
    }

    #[test]
    fn equal_rows_vanish() {
        let row = vec![poly(&[(1, &[(x(1, 1), 1)])]), poly(&[(1, &[(x(1, 2), 3)])])];
        let m = vec![row.clone(), row];
        assert!(determinant(&m).is_zero());
    }

    #[test]
    fn minor_examples() {
        let i = inst(&[&[0], &[1], &[2]], ZZ);
        assert_eq!(
            i.minor_delta(2).unwrap(),
            poly(&[(1, &[(x(3, 1), 1)]), (-1, &[(x(2, 1), 1)])])
        );
        let e3 = inst(&[&[2, 0], &[0, 2], &[2, 2]], ZZ);
        assert_eq!(
            e3.minor_delta(2).unwrap(),
            poly(&[
                (1, &[(x(2, 1), 2), (x(3, 2), 2)]),
                (-1, &[(x(2, 2), 2), (x(3, 1), 2)])
            ])
        );
        assert_eq!(
            e3.minor_delta(3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        );
        assert!(inst(&[&[1]], ZZ).minor_delta(0).is_err());
    }

    #[test]
    fn row_expansion_examples() {
        let e3 = inst(&[&[2, 0], &[0, 2], &[2, 2]], ZZ);
        let re = e3.row_expansion().unwrap();
        assert_eq!(re.signs, vec![0, 1, 0]);
        assert_eq!(re.reassemble(1), even_triangle_expected());

        let two = inst(&[&[1, 0], &[0, 3]], ZZ);
        let re = two.row_expansion().unwrap();
        // V = X1^{γ1} X2^{γ2} − X1^{γ2} X2^{γ1}
        let expected = poly(&[
            (1, &[(x(1, 1), 1), (x(2, 2), 3)]),
            (-1, &[(x(1, 2), 3), (x(2, 1), 1)]),
        ]);
        assert_eq!(re.reassemble(1), expected);
        assert_eq!(two.determinant(), expected);

        let classical = inst(&[&[0], &[1], &[2]], ZZ);
        let re = classical.row_expansion().unwrap();
        assert_eq!(re.reassemble(1), classical.determinant());
    }

    #[test]
    fn repeated_row_substitution_vanishes() {
        let e3 = inst(&[&[2, 0], &[0, 2], &[2, 2]], ZZ);
        let re = e3.row_expansion().unwrap();
        for row in 2..=3 {
            assert!(re.reassemble(row).is_zero());
        }
    }

    #[test]
    fn row_swap_negates() {
        let i = inst(&[&[1, 2], &[3, 0], &[0, 1], &[2, 2]], ZZ);
        let mut m = i.build_matrix();
        let det = determinant(&m);
        m.swap(0, 2);
        assert_eq!(determinant(&m), -&det);
    }

    #[test]
    fn content_identity() {
        let shifted = inst(&[&[3, 1], &[1, 3], &[3, 3]], ZZ);
        let v = shifted.determinant();
        let content = shifted.content_monomial();
        let q = v.exact_divide(&SparsePoly::term(ZZ, content, 1)).unwrap();
        assert_eq!(q, shifted.normalized().determinant());
        assert_eq!(q, even_triangle_expected());
    }

    #[test]
    fn size_cap() {
        let rows: Vec<Vec<u64>> = (0..13).map(|k| vec![k]).collect();
        let s = Support::from_rows(&rows).unwrap();
        assert!(matches!(
            VandermondeInstance::new(s, ZZ),
            Err(Error::SizeCap(_))
        ));
    }

    #[test]
    fn char_two_reduction() {
        let v = inst(&[&[2, 0], &[0, 2], &[2, 2]], Ring::PrimeField(2)).determinant();
        assert_eq!(v, even_triangle_expected().reduce_mod(2).unwrap());
    }
}
