use rand::Rng;
use rand_distr::StandardNormal;

use super::{Matrix, Real};

/// Uniform in `±sqrt(6 / (rows + cols))`.
pub fn xavier_uniform<T: Real, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix<T> {
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    let data = (0..rows * cols).map(|_| T::lit(rng.gen_range(-bound..bound))).collect();
    Matrix::from_vec(rows, cols, data).expect("positive shape")
}

/// `n × n` orthogonal matrix from Gram-Schmidt on a Gaussian draw.
pub fn orthogonal<T: Real, R: Rng>(n: usize, rng: &mut R) -> Matrix<T> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for u in &q {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        // A near-dependent draw is simply redrawn.
        if norm > 1e-6 {
            v.iter_mut().for_each(|a| *a /= norm);
            q.push(v);
        }
    }
    let data = q.into_iter().flatten().map(T::lit).collect();
    Matrix::from_vec(n, n, data).expect("positive shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q: Matrix<f64> = orthogonal(6, &mut rng);
        let g = q.matmul_nt(&q);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn xavier_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w: Matrix<f64> = xavier_uniform(10, 14, &mut rng);
        assert!(w.data().iter().all(|x| x.abs() <= 0.5));
    }
}
