//! Row reduction over `Q` and `F_p`.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait LinField {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.sub(a, &self.neg(b))
    }
}

pub struct Rationals;

impl LinField for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

pub struct PrimeField(pub u64);

impl LinField for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x % self.0 == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a % self.0 + self.0 - b % self.0) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % self.0;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
}

/// Reduced row echelon form of a matrix with `ncols` columns.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref<F: LinField>(f: &F, rows: &[Vec<F::E>], ncols: usize) -> Echelon<F::E> {
    let mut m: Vec<Vec<F::E>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, f.zero());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&i| !f.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(row, pr);
        let inv = f.inv(&m[row][col]);
        for x in m[row].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[row].clone();
        let support: Vec<usize> = (col..ncols).filter(|&c| !f.is_zero(&pivot_row[c])).collect();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || f.is_zero(&r[col]) {
                continue;
            }
            let c = r[col].clone();
            for &k in &support {
                r[k] = f.sub(&r[k], &f.mul(&c, &pivot_row[k]));
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    Echelon { rows: m, pivots, ncols }
}

/// A basis of the right kernel `{x : M x = 0}`.
pub fn kernel<F: LinField>(f: &F, e: &Echelon<F::E>) -> Vec<Vec<F::E>> {
    let free: Vec<usize> = (0..e.ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); e.ncols];
            v[fc] = f.one();
            for (r, &pc) in e.rows.iter().zip(&e.pivots) {
                v[pc] = f.neg(&r[fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_rank_and_kernel() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        let e = rref(&Rationals, &rows, 3);
        assert_eq!(e.rank(), 2);
        let k = kernel(&Rationals, &e);
        assert_eq!(k.len(), 1);
        for r in &rows {
            let dot: BigRational = r.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn mod_two_rank() {
        // over F_2 the rows (1,1),(1,1) are dependent; (1,0),(0,1) span
        let f = PrimeField(2);
        assert_eq!(rref(&f, &[vec![1, 1], vec![1, 1]], 2).rank(), 1);
        assert_eq!(rref(&f, &[vec![1, 0], vec![0, 1], vec![1, 1]], 2).rank(), 2);
        assert_eq!(f.inv(&1), 1);
        assert_eq!(PrimeField(7).inv(&3), 5);
    }
}
