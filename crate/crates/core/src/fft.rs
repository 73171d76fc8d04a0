//! 3D complex FFTs built from cached 1D plans, in the convention
//! `f(x_m) = Σ_k c_k e^{2πi k m / n}`: the inverse transform is the plain
//! unnormalized inverse DFT, the forward transform divides by the mode count.
//! Round trips reproduce inputs to machine precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{Array3, Axis};
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::C64;

struct PlanPair {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

fn plan_cache() -> &'static Mutex<HashMap<usize, Arc<PlanPair>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PlanPair>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plans(n: usize) -> Arc<PlanPair> {
    let mut cache = plan_cache().lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(PlanPair {
                fwd: planner.plan_fft(n, FftDirection::Forward),
                inv: planner.plan_fft(n, FftDirection::Inverse),
            })
        })
        .clone()
}

fn transform_axis(data: &mut Array3<C64>, axis: usize, forward: bool) {
    let n = data.shape()[axis];
    let pair = plans(n);
    let fft = if forward { &pair.fwd } else { &pair.inv };
    let mut scratch = vec![C64::default(); fft.get_inplace_scratch_len()];
    if axis == 2 {
        // last axis is contiguous in standard layout
        let slice = data.as_slice_mut().expect("standard layout");
        for lane in slice.chunks_exact_mut(n) {
            fft.process_with_scratch(lane, &mut scratch);
        }
    } else {
        let mut buf = vec![C64::default(); n];
        for mut lane in data.lanes_mut(Axis(axis)) {
            for (b, v) in buf.iter_mut().zip(lane.iter()) {
                *b = *v;
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            for (v, b) in lane.iter_mut().zip(buf.iter()) {
                *v = *b;
            }
        }
    }
}

/// Spatial samples -> spectral coefficients (applies the 1/N normalization).
pub fn forward(mut spatial: Array3<C64>) -> Array3<C64> {
    let scale = 1.0 / (spatial.len() as f64);
    for axis in 0..3 {
        transform_axis(&mut spatial, axis, true);
    }
    spatial.mapv_inplace(|c| c * scale);
    spatial
}

/// Spectral coefficients -> spatial samples (unnormalized inverse DFT).
pub fn inverse(mut coeffs: Array3<C64>) -> Array3<C64> {
    for axis in 0..3 {
        transform_axis(&mut coeffs, axis, false);
    }
    coeffs
}
