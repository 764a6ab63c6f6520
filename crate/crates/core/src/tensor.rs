use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::math;
use crate::vec3::Vec3;

/// Dense 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tensor3 {
    pub m: [[f64; 3]; 3],
}

impl Tensor3 {
    pub const ZERO: Tensor3 = Tensor3 { m: [[0.0; 3]; 3] };
    pub const IDENTITY: Tensor3 = Tensor3 {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub const fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Tensor3 { m }
    }

    /// `a bᵀ`.
    pub fn outer(a: Vec3, b: Vec3) -> Self {
        let (a, b) = (a.to_array(), b.to_array());
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = a[i] * b[j];
            }
        }
        Tensor3 { m }
    }

    /// Projector onto the plane orthogonal to the unit vector `n`.
    pub fn tangent_projector(n: Vec3) -> Self {
        Self::IDENTITY - Self::outer(n, n)
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::from_array(self.m[i])
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.m[j][i];
            }
        }
        Tensor3 { m }
    }

    pub fn symmetrized(&self) -> Self {
        (*self + self.transpose()) * 0.5
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn mul_mat(&self, o: &Tensor3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Tensor3 { m }
    }

    /// `aᵀ M b`.
    pub fn bilinear(&self, a: Vec3, b: Vec3) -> f64 {
        a.dot(self.mul_vec(b))
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.m.iter().flatten().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(mut self, o: Tensor3) -> Tensor3 {
        for i in 0..3 {
            for j in 0..3 {
                self.m[i][j] += o.m[i][j];
            }
        }
        self
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, o: Tensor3) -> Tensor3 {
        self + (-o)
    }
}

impl Neg for Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        self * -1.0
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Tensor3;
    fn mul(mut self, s: f64) -> Tensor3 {
        for row in &mut self.m {
            for x in row {
                *x *= s;
            }
        }
        self
    }
}

impl Index<(usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.m[i][j]
    }
}

impl IndexMut<(usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.m[i][j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_kills_normal() {
        let n = Vec3::new(1.0, 2.0, 2.0) / 3.0;
        let p = Tensor3::tangent_projector(n);
        assert!(p.mul_vec(n).norm() < 1e-15);
        assert!((p.trace() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn transpose_and_symmetrize() {
        let a = Tensor3::from_rows([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]);
        assert_eq!(a.transpose()[(0, 2)], 7.0);
        let s = a.symmetrized();
        assert_eq!(s, s.transpose());
        assert_eq!(s[(0, 1)], 3.0);
        assert_eq!(a.mul_mat(&Tensor3::IDENTITY), a);
    }
}
