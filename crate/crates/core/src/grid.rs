//! Periodic box `[0, 2π L_h)² × [0, 2π L_v)` discretized with `n_h² × n_v` Fourier
//! modes. Storage uses FFT index order; wavenumber indices run over
//! `{-n/2+1, …, n/2}` on each axis and the physical wavenumber is `k / L`.

use crate::error::{Error, Result};

/// Mode grid for the anisotropic periodic box. Both horizontal axes share `n_h`
/// and `L_h`; the vertical axis has its own `n_v`, `L_v`.
#[derive(Debug, Clone)]
pub struct Grid {
    n_h: usize,
    n_v: usize,
    l_h: f64,
    l_v: f64,
    xi_h: Vec<f64>,
    xi_v: Vec<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n_h == other.n_h
            && self.n_v == other.n_v
            && self.l_h == other.l_h
            && self.l_v == other.l_v
    }
}

fn wavenumber_of_index(i: usize, n: usize) -> i64 {
    // i in 0..n maps to k in {-n/2+1, ..., n/2}; DC at i = 0, Nyquist at i = n/2.
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl Grid {
    pub fn new(n_h: usize, n_v: usize, l_h: f64, l_v: f64) -> Result<Self> {
        if n_h < 8 || n_v < 8 || !n_h.is_multiple_of(2) || !n_v.is_multiple_of(2) {
            return Err(Error::BadGridSize { n_h, n_v });
        }
        if !(l_h > 0.0) || !(l_v > 0.0) || !l_h.is_finite() || !l_v.is_finite() {
            return Err(Error::BadBoxLength { l_h, l_v });
        }
        let xi_h = (0..n_h)
            .map(|i| wavenumber_of_index(i, n_h) as f64 / l_h)
            .collect();
        let xi_v = (0..n_v)
            .map(|i| wavenumber_of_index(i, n_v) as f64 / l_v)
            .collect();
        Ok(Grid {
            n_h,
            n_v,
            l_h,
            l_v,
            xi_h,
            xi_v,
        })
    }

    pub fn n_h(&self) -> usize {
        self.n_h
    }

    pub fn n_v(&self) -> usize {
        self.n_v
    }

    pub fn l_h(&self) -> f64 {
        self.l_h
    }

    pub fn l_v(&self) -> f64 {
        self.l_v
    }

    /// Storage dimensions `[n_h, n_h, n_v]` (axes x1, x2, x3).
    pub fn dims(&self) -> [usize; 3] {
        [self.n_h, self.n_h, self.n_v]
    }

    pub fn total_modes(&self) -> usize {
        self.n_h * self.n_h * self.n_v
    }

    fn axis_n(&self, axis: usize) -> usize {
        if axis == 2 {
            self.n_v
        } else {
            self.n_h
        }
    }

    /// Integer wavenumber of storage index `i` on `axis`.
    pub fn index_to_k(&self, axis: usize, i: usize) -> i64 {
        wavenumber_of_index(i, self.axis_n(axis))
    }

    /// Storage index of integer wavenumber `k` on `axis`; errors outside
    /// `{-n/2+1, …, n/2}`.
    pub fn k_to_index(&self, axis: usize, k: i64) -> Result<usize> {
        let n = self.axis_n(axis) as i64;
        if k < -n / 2 + 1 || k > n / 2 {
            return Err(Error::IndexOutOfRange {
                k: match axis {
                    0 => [k, 0, 0],
                    1 => [0, k, 0],
                    _ => [0, 0, k],
                },
            });
        }
        Ok(if k >= 0 { k as usize } else { (k + n) as usize })
    }

    /// Storage index triple for an integer wavenumber triple.
    pub fn k_triple_to_index(&self, k: [i64; 3]) -> Result<[usize; 3]> {
        Ok([
            self.k_to_index(0, k[0])?,
            self.k_to_index(1, k[1])?,
            self.k_to_index(2, k[2])?,
        ])
    }

    /// Physical wavenumber `k / L` at storage index `i` on `axis`.
    pub fn xi(&self, axis: usize, i: usize) -> f64 {
        if axis == 2 {
            self.xi_v[i]
        } else {
            self.xi_h[i]
        }
    }

    /// Horizontal wavenumber table (length `n_h`), shared by axes 0 and 1.
    pub fn xi_h_table(&self) -> &[f64] {
        &self.xi_h
    }

    /// Vertical wavenumber table (length `n_v`).
    pub fn xi_v_table(&self) -> &[f64] {
        &self.xi_v
    }

    /// Index of `-k` given the index of `k` on `axis`.
    pub fn neg_index(&self, axis: usize, i: usize) -> usize {
        let n = self.axis_n(axis);
        (n - i) % n
    }

    /// Whether storage index `i` is the unpaired Nyquist mode `k = n/2`.
    pub fn is_nyquist(&self, axis: usize, i: usize) -> bool {
        i == self.axis_n(axis) / 2
    }

    /// Dealias cutoff on `axis`: the largest integer strictly below `n/3`, so
    /// quadratic aliases always land outside the retained ball.
    pub fn dealias_kmax(&self, axis: usize) -> i64 {
        ((self.axis_n(axis) as i64) - 1) / 3
    }

    /// Whether storage index `i` on `axis` is inside the 2/3-rule ball.
    pub fn dealias_keep(&self, axis: usize, i: usize) -> bool {
        self.index_to_k(axis, i).abs() <= self.dealias_kmax(axis)
    }

    /// Largest |ξ_h| on the grid (corner of the horizontal index square).
    pub fn xi_h_max(&self) -> f64 {
        let m = (self.n_h / 2) as f64 / self.l_h;
        m * std::f64::consts::SQRT_2
    }

    /// Largest |ξ₃| on the grid.
    pub fn xi_v_max(&self) -> f64 {
        (self.n_v / 2) as f64 / self.l_v
    }

    /// Smallest nonzero |ξ_h| on the grid (one step on one horizontal axis).
    pub fn xi_h_min_nonzero(&self) -> f64 {
        1.0 / self.l_h
    }
}
