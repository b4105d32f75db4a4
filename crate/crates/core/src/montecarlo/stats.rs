use std::ops::Sub;

/// Raw moment sums of one block of measurements.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub n: f64,
    pub e: f64,
    pub e2: f64,
    pub m: f64,
    pub m_abs: f64,
    pub m2: f64,
    pub m4: f64,
}

impl Moments {
    pub fn of(energies: &[f64], mags: &[f64]) -> Self {
        let mut out = Self {
            n: energies.len() as f64,
            ..Self::default()
        };
        for (&e, &m) in energies.iter().zip(mags) {
            out.e += e;
            out.e2 += e * e;
            out.m += m;
            out.m_abs += m.abs();
            out.m2 += m * m;
            out.m4 += m * m * m * m;
        }
        out
    }

    pub fn mean_energy(&self) -> f64 {
        self.e / self.n
    }

    pub fn energy_variance(&self) -> f64 {
        self.e2 / self.n - self.mean_energy().powi(2)
    }

    pub fn mean_magnetization(&self) -> f64 {
        self.m / self.n
    }

    pub fn mean_abs_magnetization(&self) -> f64 {
        self.m_abs / self.n
    }

    /// `1 - <m⁴> / (3 <m²>²)`.
    pub fn binder(&self) -> f64 {
        let m2 = self.m2 / self.n;
        1.0 - (self.m4 / self.n) / (3.0 * m2 * m2)
    }
}

impl std::iter::Sum for Moments {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| Self {
            n: a.n + b.n,
            e: a.e + b.e,
            e2: a.e2 + b.e2,
            m: a.m + b.m,
            m_abs: a.m_abs + b.m_abs,
            m2: a.m2 + b.m2,
            m4: a.m4 + b.m4,
        })
    }
}

impl Sub for Moments {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self {
            n: self.n - b.n,
            e: self.e - b.e,
            e2: self.e2 - b.e2,
            m: self.m - b.m,
            m_abs: self.m_abs - b.m_abs,
            m2: self.m2 - b.m2,
            m4: self.m4 - b.m4,
        }
    }
}

/// Delete-one-block jackknife: the full-sample estimate and its error.
pub fn jackknife(blocks: &[Moments], estimator: impl Fn(&Moments) -> f64) -> (f64, f64) {
    let total: Moments = blocks.iter().copied().sum();
    let estimate = estimator(&total);
    let b = blocks.len() as f64;
    if blocks.len() < 2 {
        return (estimate, 0.0);
    }
    let loo: Vec<f64> = blocks
        .iter()
        .map(|&blk| estimator(&(total - blk)))
        .collect();
    let mean = loo.iter().sum::<f64>() / b;
    let var = loo.iter().map(|x| (x - mean).powi(2)).sum::<f64>() * (b - 1.0) / b;
    (estimate, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jackknife_of_the_mean_is_the_standard_error() {
        let xs: Vec<f64> = (0..40).map(|i| ((i * 7919) % 13) as f64).collect();
        let blocks: Vec<Moments> = xs.iter().map(|&x| Moments::of(&[x], &[0.0])).collect();
        let (m, err) = jackknife(&blocks, Moments::mean_energy);
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((m - mean).abs() < 1e-12);
        assert!((err - sd / n.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn errors_are_nonnegative_and_zero_for_constants() {
        let blocks = vec![Moments::of(&[2.0, 2.0], &[1.0, 1.0]); 5];
        let (v, err) = jackknife(&blocks, Moments::energy_variance);
        assert!(v.abs() < 1e-12);
        assert!((0.0..1e-12).contains(&err));
        let (b, _) = jackknife(&blocks, Moments::binder);
        assert!((b - 2.0 / 3.0).abs() < 1e-12);
    }
}
