use thiserror::Error;

use super::echelon::{canonical_rows, Echelon};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("ambient dimension mismatch ({left} vs {right})")]
pub struct AmbientMismatch {
    pub left: usize,
    pub right: usize,
}

/// A subspace of `Q^ambient` held as its unique integer-scaled reduced
/// echelon basis (primitive rows, positive leading entries).
///
/// Two values are equal exactly when they present the same subspace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubspaceBasis<S: Scalar> {
    ambient: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> SubspaceBasis<S> {
    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<S>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector/ambient mismatch");
        }
        SubspaceBasis {
            ambient,
            rows: canonical_rows(ambient, vectors),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let mut ech = Echelon::new(self.ambient);
        for r in &self.rows {
            ech.insert(r.clone()).expect("scalar overflow");
        }
        ech.contains(v).expect("scalar overflow")
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis<S>) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &SubspaceBasis<S>) -> Result<SubspaceBasis<S>, AmbientMismatch> {
        self.check_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(SubspaceBasis::span(self.ambient, rows))
    }

    /// Intersection by the Zassenhaus construction: echelonize the rows
    /// `[a | a]` and `[b | 0]`; rows whose left half vanished carry a basis
    /// of the intersection in their right half.
    pub fn intersect(&self, other: &SubspaceBasis<S>) -> Result<SubspaceBasis<S>, AmbientMismatch> {
        self.check_ambient(other)?;
        let n = self.ambient;
        let mut ech = Echelon::new(2 * n);
        for a in &self.rows {
            let mut row = a.clone();
            row.extend(a.iter().cloned());
            ech.insert(row).expect("scalar overflow");
        }
        for b in &other.rows {
            let mut row = b.clone();
            row.extend(std::iter::repeat(S::zero()).take(n));
            ech.insert(row).expect("scalar overflow");
        }
        let vectors = ech
            .rows()
            .iter()
            .filter(|row| row[..n].iter().all(|e| e.is_zero()))
            .map(|row| row[n..].to_vec())
            .collect();
        Ok(SubspaceBasis::span(n, vectors))
    }

    fn check_ambient(&self, other: &SubspaceBasis<S>) -> Result<(), AmbientMismatch> {
        if self.ambient != other.ambient {
            return Err(AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;
    use proptest::prelude::*;

    fn row(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn unit(n: usize, i: usize) -> Vec<Int> {
        let mut v = vec![Int::from(0); n];
        v[i] = Int::from(1);
        v
    }

    #[test]
    fn intersect_idempotent() {
        let a = SubspaceBasis::span(4, vec![row(&[1, 2, 0, 0]), row(&[0, 0, 1, 1])]);
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn intersect_coordinate_planes() {
        let a = SubspaceBasis::span(3, vec![unit(3, 0), unit(3, 1)]);
        let b = SubspaceBasis::span(3, vec![unit(3, 1), unit(3, 2)]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, SubspaceBasis::span(3, vec![unit(3, 1)]));
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let a = SubspaceBasis::<Int>::zero(2);
        let b = SubspaceBasis::<Int>::zero(3);
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn canonical_form_idempotent() {
        let a = SubspaceBasis::span(3, vec![row(&[2, 4, 6]), row(&[1, 1, 1])]);
        let again = SubspaceBasis::span(3, a.rows().to_vec());
        assert_eq!(a, again);
    }

    fn arb_vectors() -> impl Strategy<Value = Vec<Vec<Int>>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..4)
            .prop_map(|vs| vs.into_iter().map(|v| row(&v)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn intersection_dimension_formula(va in arb_vectors(), vb in arb_vectors()) {
            let a = SubspaceBasis::span(5, va);
            let b = SubspaceBasis::span(5, vb);
            let i = a.intersect(&b).unwrap();
            let s = a.sum(&b).unwrap();
            prop_assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
            for v in i.rows() {
                prop_assert!(a.contains(v));
                prop_assert!(b.contains(v));
            }
        }
    }
}
