//! Sparse orthonormal basis of the antisymmetric N-particle sector.
//!
//! Each basis state is the normalized Slater determinant over one increasing
//! index tuple, stored as its `N!` signed product-basis components. Compressing
//! a product-basis matrix onto the sector costs `d² (N!)²`, which keeps
//! spectra cheap even when the product space is a few hundred dimensional.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone)]
pub struct AntisymmetricSector {
    n: usize,
    particles: usize,
    tuples: Vec<Vec<usize>>,
    /// Per basis state: `(product index, amplitude)` pairs.
    components: Vec<Vec<(usize, f64)>>,
}

fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    // Heap's algorithm, tracking parity.
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1.0;
    out.push((perm.clone(), sign));
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for t in i..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Product-basis index of `|i_1>⊗…⊗|i_N>`.
pub(crate) fn product_index(n: usize, indices: impl IntoIterator<Item = usize>) -> usize {
    indices.into_iter().fold(0, |acc, i| acc * n + i)
}

/// Signed components of the normalized Slater determinant over `indices`
/// (zero-based, distinct, any order).
pub(crate) fn slater_components(n: usize, indices: &[usize]) -> Vec<(usize, f64)> {
    let k = indices.len();
    let norm = 1.0 / (1..=k).map(|i| i as f64).product::<f64>().sqrt();
    permutations(k)
        .into_iter()
        .map(|(perm, sign)| (product_index(n, perm.iter().map(|&p| indices[p])), sign * norm))
        .collect()
}

impl AntisymmetricSector {
    pub fn new(n: usize, particles: usize) -> Result<Self> {
        if particles == 0 || particles > n {
            return Err(Error::InvalidDimensions(format!(
                "{particles} particles in a {n}-dimensional single-particle space"
            )));
        }
        let tuples = combinations(n, particles);
        let components = tuples.iter().map(|t| slater_components(n, t)).collect();
        Ok(Self {
            n,
            particles,
            tuples,
            components,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    /// Sector dimension `C(n, N)`.
    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn product_dim(&self) -> usize {
        self.n.pow(self.particles as u32)
    }

    /// Increasing index tuple labelling basis state `a`.
    pub fn tuple(&self, a: usize) -> &[usize] {
        &self.tuples[a]
    }

    /// `B† M B` for a product-basis operator `M`.
    pub fn compress(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |a, b| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(i, s) in &self.components[a] {
                for &(j, t) in &self.components[b] {
                    acc += m[(i, j)] * (s * t);
                }
            }
            acc
        })
    }

    /// `B C B†` for a sector operator `C`.
    pub fn expand(&self, c: &ComplexMatrix) -> ComplexMatrix {
        let dim = self.product_dim();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (a, comp_a) in self.components.iter().enumerate() {
            for (b, comp_b) in self.components.iter().enumerate() {
                let cab = c[(a, b)];
                if cab == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for &(i, s) in comp_a {
                    for &(j, t) in comp_b {
                        out[(i, j)] += cab * (s * t);
                    }
                }
            }
        }
        out
    }

    /// Product-basis vector `Σ_a coeffs[a] |S_a>`.
    pub fn embed(&self, coeffs: &[Complex64]) -> ComplexMatrix {
        let mut v = ComplexMatrix::zeros(self.product_dim(), 1);
        for (comp, &c) in self.components.iter().zip(coeffs) {
            for &(i, s) in comp {
                v[(i, 0)] += c * s;
            }
        }
        v
    }

    /// Projector onto the sector in the product basis.
    pub fn projector(&self) -> ComplexMatrix {
        self.expand(&ComplexMatrix::identity(self.dim()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let total: f64 = perms.iter().map(|p| p.1).sum();
        assert_eq!(total, 0.0);
        for (p, s) in &perms {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(*s, if inversions % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn sector_dimensions() {
        assert_eq!(AntisymmetricSector::new(4, 2).unwrap().dim(), 6);
        assert_eq!(AntisymmetricSector::new(6, 2).unwrap().dim(), 15);
        assert_eq!(AntisymmetricSector::new(6, 3).unwrap().dim(), 20);
        assert!(AntisymmetricSector::new(2, 3).is_err());
    }

    #[test]
    fn projector_is_idempotent_with_correct_trace() {
        for (n, k) in [(4, 2), (5, 3)] {
            let s = AntisymmetricSector::new(n, k).unwrap();
            let p = s.projector();
            assert!((&p * &p).max_abs_diff(&p) < 1e-12);
            assert!((p.trace().re - s.dim() as f64).abs() < 1e-12);
            let c = s.compress(&p);
            assert!(c.max_abs_diff(&ComplexMatrix::identity(s.dim())) < 1e-12);
        }
    }
}
