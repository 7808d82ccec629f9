//! Exact fields (ℚ and ℤ/p) and dense Gaussian elimination over them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// ℤ/p for a prime p < 2³².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::Coefficients(format!("{p} is not a prime below 2^32")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        // a^(p-2)
        let (mut base, mut exp, mut acc) = (*a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut [Vec<F::Elem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> usize {
    rref(field, &mut rows, ncols).len()
}

/// Basis of the null space `{x : A x = 0}`, one vector per free column in increasing order.
pub fn kernel_basis<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(field, &mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&work[r][free]);
            }
            v
        })
        .collect()
}

/// Some `x` with `A x = b`, or `None` when `b` is not in the column space.
pub fn solve<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(rows.len(), b.len(), "right-hand side has wrong length");
    let mut aug: Vec<Vec<F::Elem>> = rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Incrementally built echelon basis whose rows remember which tagged inputs produced them.
///
/// Inserting with a zero tag adds a vector that only spans (e.g. a coboundary); reducing a
/// vector then reports its coordinates with respect to the tagged inputs.
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    tag_len: usize,
    rows: Vec<(usize, Vec<F::Elem>, Vec<F::Elem>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize, tag_len: usize) -> Self {
        Echelon {
            field,
            dim,
            tag_len,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Returns `(residual, tag)` with `v = residual + Σ rows` and the rows' tags summed to `tag`.
    pub fn reduce(&self, v: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let f = &self.field;
        let mut v = v.to_vec();
        let mut tag = vec![f.zero(); self.tag_len];
        for (pivot, row, row_tag) in &self.rows {
            if f.is_zero(&v[*pivot]) {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            for (t, y) in tag.iter_mut().zip(row_tag) {
                if !f.is_zero(y) {
                    *t = f.add(t, &f.mul(&c, y));
                }
            }
        }
        (v, tag)
    }

    /// Adds `v` if it is independent of the current rows. Returns whether it was added.
    pub fn insert(&mut self, v: &[F::Elem], tag: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        let f = self.field.clone();
        let (residual, used) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&residual[pivot]);
        let row: Vec<F::Elem> = residual.iter().map(|x| f.mul(x, &inv)).collect();
        let row_tag: Vec<F::Elem> = tag.iter().zip(&used).map(|(t, u)| f.mul(&f.sub(t, u), &inv)).collect();
        self.rows.push((pivot, row, row_tag));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &f.inv(&3)), 1);
        assert_eq!(f.from_i64(-1), 6);
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn rank_over_q_and_fp() {
        let rows = vec![vec![1, 2], vec![2, 4], vec![1, 0]];
        let rq: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        assert_eq!(rank(&Rationals, rq, 2), 2);
        let f2 = PrimeField::new(2).unwrap();
        let r2: Vec<Vec<_>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| f2.from_i64(x)).collect())
            .collect();
        assert_eq!(rank(&f2, r2, 2), 1);
    }

    #[test]
    fn solve_half() {
        let a = vec![vec![q(2)]];
        let x = solve(&Rationals, &a, 1, &[q(1)]).unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into())]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = vec![vec![q(1), q(1), q(0)]];
        let k = kernel_basis(&Rationals, &a, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            let s: BigRational = a[0].iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn echelon_tags_recover_coordinates() {
        let mut e = Echelon::new(Rationals, 3, 2);
        // a coboundary direction with zero tag, then two tagged vectors
        assert!(e.insert(&[q(1), q(1), q(0)], &[q(0), q(0)]));
        assert!(e.insert(&[q(0), q(1), q(0)], &[q(1), q(0)]));
        assert!(e.insert(&[q(0), q(0), q(2)], &[q(0), q(1)]));
        assert!(!e.insert(&[q(1), q(2), q(0)], &[q(0), q(0)]));
        // z = 3*(0,1,0) + 5*(0,0,2) + 4*(1,1,0)
        let z = [q(4), q(7), q(10)];
        let (res, tag) = e.reduce(&z);
        assert!(res.iter().all(Zero::is_zero));
        assert_eq!(tag, vec![q(3), q(5)]);
    }
}
