//! Exact arithmetic in the maximal order Z[(1+sqrt(-19))/2] and the fixed
//! 3x3 Gram matrix whose 2x2 minors give the projection degrees of a genus 3
//! cover onto its elliptic factors.
//!
//! Elements are stored doubled: the pair (a, b) encodes (a + b sqrt(-19))/2
//! with a and b of equal parity, so every half-integer entry stays exact.

use crate::error::{Error, Result};

/// (a + b sqrt(-19))/2 with a = b mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfInt {
    a: i64,
    b: i64,
}

impl HalfInt {
    pub fn new(a: i64, b: i64) -> HalfInt {
        assert_eq!(a.rem_euclid(2), b.rem_euclid(2), "mixed-parity element");
        HalfInt { a, b }
    }

    /// A rational integer n, stored as (2n, 0).
    pub fn int(n: i64) -> HalfInt {
        HalfInt { a: 2 * n, b: 0 }
    }

    pub fn conj(self) -> HalfInt {
        HalfInt { a: self.a, b: -self.b }
    }

    pub fn add(self, o: HalfInt) -> HalfInt {
        HalfInt { a: self.a + o.a, b: self.b + o.b }
    }

    pub fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt { a: self.a - o.a, b: self.b - o.b }
    }

    pub fn mul(self, o: HalfInt) -> HalfInt {
        // ((a1 + b1 w)(a2 + b2 w))/4 with w^2 = -19; the doubled parts below
        // are integers exactly because a = b mod 2 on both factors.
        let a = self.a * o.a - 19 * self.b * o.b;
        let b = self.a * o.b + self.b * o.a;
        debug_assert_eq!(a.rem_euclid(2), 0);
        debug_assert_eq!(b.rem_euclid(2), 0);
        HalfInt { a: a / 2, b: b / 2 }
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_int(self) -> Option<i64> {
        if self.b == 0 && self.a % 2 == 0 {
            Some(self.a / 2)
        } else {
            None
        }
    }
}

/// A 3x3 Hermitian Gram matrix over the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianGram {
    entries: [[HalfInt; 3]; 3],
}

impl HermitianGram {
    pub fn new(entries: [[HalfInt; 3]; 3]) -> Result<HermitianGram> {
        let g = HermitianGram { entries };
        if !g.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(g)
    }

    /// The Gram matrix of the unique irreducible unimodular rank 3 form:
    /// [[2, 1, -1], [1, 3, (-3+w)/2], [-1, (-3-w)/2, 3]] with w = sqrt(-19).
    pub fn canonical() -> HermitianGram {
        let i = HalfInt::int;
        HermitianGram {
            entries: [
                [i(2), i(1), i(-1)],
                [i(1), i(3), HalfInt::new(-3, 1)],
                [i(-1), HalfInt::new(-3, -1), i(3)],
            ],
        }
    }

    pub fn identity() -> HermitianGram {
        let (o, z) = (HalfInt::int(1), HalfInt::int(0));
        HermitianGram {
            entries: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    fn is_hermitian(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.entries[i][j] == self.entries[j][i].conj()))
    }

    /// Degree of the k-th projection C -> E: the determinant of the 2x2
    /// minor obtained by deleting row and column k (1-indexed). Hermitian
    /// symmetry forces the value to be a rational integer.
    pub fn projection_degree(&self, k: usize) -> Result<i64> {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidInput(format!("projection index {k} not in 1..=3")));
        }
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let keep: Vec<usize> = (0..3).filter(|&i| i != k - 1).collect();
        let (i, j) = (keep[0], keep[1]);
        let det = self.entries[i][i]
            .mul(self.entries[j][j])
            .sub(self.entries[i][j].mul(self.entries[j][i]));
        Ok(det.as_int().expect("hermitian minor determinant is rational"))
    }

    /// Full determinant; the canonical matrix is unimodular with value 1.
    pub fn det(&self) -> Result<i64> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let e = &self.entries;
        let mut acc = HalfInt::int(0);
        for (c, sign) in [(0, 1i64), (1, -1), (2, 1)] {
            let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
            let minor = e[1][cols[0]]
                .mul(e[2][cols[1]])
                .sub(e[1][cols[1]].mul(e[2][cols[0]]));
            let term = e[0][c].mul(minor);
            acc = if sign == 1 { acc.add(term) } else { acc.sub(term) };
        }
        Ok(acc.as_int().expect("hermitian determinant is rational"))
    }

    pub fn check_unimodular(&self) -> Result<()> {
        let d = self.det()?;
        if d == 1 {
            Ok(())
        } else {
            Err(Error::NotUnimodular(d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_is_hermitian_and_unimodular() {
        let g = HermitianGram::canonical();
        assert_eq!(g.det().unwrap(), 1);
        g.check_unimodular().unwrap();
    }

    #[test]
    fn projection_degrees() {
        let g = HermitianGram::canonical();
        // det [[3,(-3+w)/2],[(-3-w)/2,3]] = 9 - (9+19)/4 = 2.
        assert_eq!(g.projection_degree(1).unwrap(), 2);
        assert_eq!(g.projection_degree(2).unwrap(), 5);
        // det [[2,1],[1,3]] = 5.
        assert_eq!(g.projection_degree(3).unwrap(), 5);
        assert!(g.projection_degree(0).is_err());
        assert!(g.projection_degree(4).is_err());
    }

    #[test]
    fn identity_minors_are_one() {
        let g = HermitianGram::identity();
        for k in 1..=3 {
            assert_eq!(g.projection_degree(k).unwrap(), 1);
        }
        assert_eq!(g.det().unwrap(), 1);
    }

    #[test]
    fn non_hermitian_rejected() {
        let i = HalfInt::int;
        // Entry (0,1) is not the conjugate of (1,0).
        let bad = HermitianGram::new([
            [i(2), i(1), i(-1)],
            [i(2), i(3), HalfInt::new(-3, 1)],
            [i(-1), HalfInt::new(-3, -1), i(3)],
        ]);
        assert!(matches!(bad, Err(Error::NotHermitian)));
    }

    #[test]
    fn half_integer_arithmetic() {
        // ((1+w)/2)((1-w)/2) = (1+19)/4 = 5, the norm of (1+w)/2.
        let x = HalfInt::new(1, 1);
        assert_eq!(x.mul(x.conj()).as_int(), Some(5));
        // ((-3+w)/2)((-3-w)/2) = (9+19)/4 = 7.
        let y = HalfInt::new(-3, 1);
        assert_eq!(y.mul(y.conj()).as_int(), Some(7));
        assert_eq!(HalfInt::int(3).add(HalfInt::new(1, 1)).a, 7);
        assert_eq!(HalfInt::new(1, 1).as_int(), None);
    }

    #[test]
    #[should_panic(expected = "mixed-parity")]
    fn mixed_parity_panics() {
        HalfInt::new(1, 2);
    }
}
