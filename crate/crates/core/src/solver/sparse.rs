//! Minimal CSR matrix and Jacobi-preconditioned conjugate gradients for the
//! lattice stiffness systems.

pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl Csr {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(n: usize, trips: &mut Vec<(u32, u32, f64)>) -> Csr {
        trips.sort_unstable_by_key(|&(r, c, _)| ((r as u64) << 32) | c as u64);
        let mut cols: Vec<u32> = Vec::with_capacity(trips.len());
        let mut vals: Vec<f64> = Vec::with_capacity(trips.len());
        let mut rows: Vec<u32> = Vec::with_capacity(trips.len());
        for &(r, c, v) in trips.iter() {
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &r in &rows {
            row_ptr[r as usize + 1] += 1;
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Csr {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for r in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            y[r] = acc;
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.cols[k] as usize == r {
                    d[r] += self.vals[k];
                }
            }
        }
        d
    }
}

pub struct CgResult {
    pub iterations: usize,
    pub converged: bool,
    pub rel_residual: f64,
}

/// Jacobi-preconditioned CG for SPD systems. Solves `A x = b` in place,
/// starting from the provided `x`.
pub fn pcg(a: &Csr, b: &[f64], x: &mut [f64], rtol: f64, max_iter: usize) -> CgResult {
    let n = a.n;
    let mut diag = a.diag();
    for d in diag.iter_mut() {
        if *d <= 0.0 || !d.is_finite() {
            *d = 1.0;
        }
    }
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let norm_b = b.iter().fold(0.0f64, |s, v| s + v * v).sqrt();
    let target = if norm_b > 0.0 { rtol * norm_b } else { 0.0 };
    let mut rnorm = r.iter().fold(0.0f64, |s, v| s + v * v).sqrt();
    if rnorm <= target || rnorm == 0.0 {
        return CgResult {
            iterations: 0,
            converged: true,
            rel_residual: if norm_b > 0.0 { rnorm / norm_b } else { 0.0 },
        };
    }
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for it in 1..=max_iter {
        a.matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if !(pap > 0.0) || !pap.is_finite() {
            return CgResult {
                iterations: it,
                converged: false,
                rel_residual: rnorm / norm_b.max(f64::MIN_POSITIVE),
            };
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rnorm = r.iter().fold(0.0f64, |s, v| s + v * v).sqrt();
        if rnorm <= target {
            return CgResult {
                iterations: it,
                converged: true,
                rel_residual: rnorm / norm_b,
            };
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    CgResult {
        iterations: max_iter,
        converged: false,
        rel_residual: rnorm / norm_b.max(f64::MIN_POSITIVE),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_merges_duplicate_triplets() {
        let mut trips = vec![
            (0u32, 0u32, 1.0),
            (0, 0, 1.0),
            (1, 1, 3.0),
            (0, 1, -1.0),
            (1, 0, -1.0),
        ];
        let a = Csr::from_triplets(2, &mut trips);
        let mut y = vec![0.0; 2];
        a.matvec(&[1.0, 1.0], &mut y);
        assert_eq!(y, vec![1.0, 2.0]);
    }

    #[test]
    fn pcg_solves_small_spd_system() {
        // [4 1; 1 3] x = [1; 2]
        let mut trips = vec![
            (0u32, 0u32, 4.0),
            (0, 1, 1.0),
            (1, 0, 1.0),
            (1, 1, 3.0),
        ];
        let a = Csr::from_triplets(2, &mut trips);
        let mut x = vec![0.0; 2];
        let res = pcg(&a, &[1.0, 2.0], &mut x, 1e-12, 100);
        assert!(res.converged);
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-10);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-10);
    }

    #[test]
    fn pcg_zero_rhs_returns_start() {
        let mut trips = vec![(0u32, 0u32, 0.0)];
        let a = Csr::from_triplets(1, &mut trips);
        let mut x = vec![0.0];
        let res = pcg(&a, &[0.0], &mut x, 1e-10, 10);
        assert!(res.converged);
        assert_eq!(x[0], 0.0);
    }
}
