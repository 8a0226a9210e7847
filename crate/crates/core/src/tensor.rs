//! Dense rational tensors used to report defects (torsion, curvature,
//! associators, Jacobi anomalies, Maurer-Cartan residues).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// A rank-3 or rank-4 table of rationals, row-major in its indices.
///
/// Norm zero iff every entry is zero; arithmetic is exact so there is no
/// threshold involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectTensor {
    shape: Vec<usize>,
    data: Vec<Rational>,
}

impl DefectTensor {
    pub fn zeros(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        DefectTensor { shape: shape.to_vec(), data: vec![Rational::zero(); len] }
    }

    pub fn from_flat(shape: &[usize], data: Vec<Rational>) -> Self {
        assert_eq!(shape.iter().product::<usize>(), data.len());
        DefectTensor { shape: shape.to_vec(), data }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn as_flat(&self) -> &[Rational] {
        &self.data
    }

    fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.shape.len(), "wrong number of indices");
        index.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            assert!(i < n, "index out of range");
            acc * n + i
        })
    }

    pub fn get(&self, index: &[usize]) -> &Rational {
        &self.data[self.offset(index)]
    }

    pub fn get_mut(&mut self, index: &[usize]) -> &mut Rational {
        let o = self.offset(index);
        &mut self.data[o]
    }

    /// Largest absolute entry (zero for an empty tensor).
    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// First nonzero entry in row-major order, with its multi-index.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, Rational)> {
        let pos = self.data.iter().position(|x| !x.is_zero())?;
        let mut index = vec![0; self.shape.len()];
        let mut rest = pos;
        for (slot, &n) in index.iter_mut().zip(&self.shape).rev() {
            *slot = rest % n;
            rest /= n;
        }
        Some((index, self.data[pos].clone()))
    }

    pub fn neg(&self) -> Self {
        DefectTensor { shape: self.shape.clone(), data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        DefectTensor { shape: self.shape.clone(), data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn first_nonzero_reports_multi_index() {
        let mut t = DefectTensor::zeros(&[2, 3, 2]);
        assert!(t.is_zero());
        assert_eq!(t.first_nonzero(), None);
        *t.get_mut(&[1, 2, 0]) = rat(-3, 2);
        *t.get_mut(&[1, 2, 1]) = int(1);
        assert_eq!(t.first_nonzero(), Some((vec![1, 2, 0], rat(-3, 2))));
        assert_eq!(t.max_abs(), rat(3, 2));
        assert!(t.sub(&t).is_zero());
    }

    #[test]
    fn empty_shape_is_zero() {
        let t = DefectTensor::zeros(&[0, 0, 0]);
        assert!(t.is_zero());
        assert_eq!(t.max_abs(), int(0));
    }
}
