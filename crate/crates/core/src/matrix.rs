//! Dense square matrices over a ring of values, with exact arithmetic.

use crate::error::{Error, Result};
use crate::fields::{Ring, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<Value>,
}

impl Matrix {
    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = ring.one();
        }
        Matrix { n, data }
    }

    pub fn from_fn(ring: &Ring, n: usize, mut f: impl FnMut(usize, usize) -> Value) -> Matrix {
        let _ = ring;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Value {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Matrix, ring: &Ring) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let prod = ring.mul(a, b);
                    data[i * n + j] = ring.add(&data[i * n + j], &prod);
                }
            }
        }
        Matrix { n, data }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        let one = ring.one();
        let zero = ring.zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { &one } else { &zero };
                if self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_diagonal(&self, ring: &Ring) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && !ring.is_zero(self.at(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// Entrywise map.
    pub fn map(&self, f: impl FnMut(&Value) -> Value) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Inverse by Gaussian elimination; requires the base ring to be a
    /// field.
    pub fn inverse(&self, ring: &Ring) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Matrix::identity(ring, n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !ring.is_zero(a.at(r, col)))
                .ok_or(Error::SingularMatrix)?;
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pinv = ring.inv(a.at(col, col))?;
            for j in 0..n {
                let v = ring.mul(a.at(col, j), &pinv);
                a.set(col, j, v);
                let w = ring.mul(inv.at(col, j), &pinv);
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col || ring.is_zero(a.at(r, col)) {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..n {
                    let v = ring.sub(a.at(r, j), &ring.mul(&f, a.at(col, j)));
                    a.set(r, j, v);
                    let w = ring.sub(inv.at(r, j), &ring.mul(&f, inv.at(col, j)));
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }

    /// Row-major canonical encoding: dimension, then entry encodings.
    pub fn encode(&self, ring: &Ring) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.data.len() * 10);
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        for v in &self.data {
            ring.encode_into(v, &mut out);
        }
        out
    }

    /// Factorization `A = U·D·L` with `U` upper unitriangular, `D`
    /// diagonal, `L` lower unitriangular; unique when it exists. Fails with
    /// `SingularMatrix` when some trailing pivot vanishes.
    pub fn udl(&self, ring: &Ring) -> Result<(Matrix, Vec<Value>, Matrix)> {
        let n = self.n;
        let mut m = self.clone();
        let mut u = Matrix::identity(ring, n);
        // Clear entries above the diagonal, working from the last column
        // to the first; row j is the pivot row for column j.
        for j in (0..n).rev() {
            let pivot = m.at(j, j).clone();
            if ring.is_zero(&pivot) {
                return Err(Error::SingularMatrix);
            }
            let pinv = ring.inv(&pivot)?;
            for i in 0..j {
                if ring.is_zero(m.at(i, j)) {
                    continue;
                }
                let f = ring.mul(m.at(i, j), &pinv);
                // row_i -= f · row_j in m; record the inverse op in u by
                // the column update U := U · E_{ij}(f).
                for col in 0..n {
                    let v = ring.sub(m.at(i, col), &ring.mul(&f, m.at(j, col)));
                    m.set(i, col, v);
                }
                for row in 0..n {
                    let v = ring.add(u.at(row, j), &ring.mul(&f, u.at(row, i)));
                    u.set(row, j, v);
                }
            }
        }
        // m is now lower triangular with the pivots on the diagonal.
        let d: Vec<Value> = (0..n).map(|i| m.at(i, i).clone()).collect();
        let mut l = Matrix::identity(ring, n);
        for i in 0..n {
            let dinv = ring.inv(&d[i])?;
            for j in 0..i {
                l.set(i, j, ring.mul(m.at(i, j), &dinv));
            }
        }
        Ok((u, d, l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_roundtrip() {
        let f8 = Ring::finite_field(2, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        while found < 20 {
            let m = Matrix::from_fn(&f8, 4, |_, _| f8.sample(&mut rng, 0));
            if let Ok(inv) = m.inverse(&f8) {
                assert!(m.mul(&inv, &f8).is_identity(&f8));
                found += 1;
            }
        }
    }

    #[test]
    fn udl_reconstructs_and_is_unique_shaped() {
        let f27 = Ring::finite_field(3, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut found = 0;
        while found < 20 {
            let m = Matrix::from_fn(&f27, 5, |_, _| f27.sample(&mut rng, 0));
            if let Ok((u, d, l)) = m.udl(&f27) {
                let mut dm = Matrix::identity(&f27, 5);
                for i in 0..5 {
                    dm.set(i, i, d[i].clone());
                }
                assert_eq!(u.mul(&dm, &f27).mul(&l, &f27), m);
                for i in 0..5 {
                    assert_eq!(u.at(i, i), &f27.one());
                    assert_eq!(l.at(i, i), &f27.one());
                    for j in (i + 1)..5 {
                        assert!(f27.is_zero(l.at(i, j)));
                        assert!(f27.is_zero(u.at(j, i)));
                    }
                }
                found += 1;
            }
        }
    }
}
