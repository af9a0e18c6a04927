//! Boolean sumsets of indicator vectors: `out[k] = ∃ i + j = k, a[i] ∧ b[j]`.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Below this many members on the sparser side, shift-OR beats an FFT.
const DIRECT_LIMIT: usize = 2048;

pub fn bool_sumset(a: &[bool], b: &[bool]) -> Vec<bool> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let ca = a.iter().filter(|&&x| x).count();
    let cb = b.iter().filter(|&&x| x).count();
    if ca == 0 || cb == 0 {
        return vec![false; a.len() + b.len() - 1];
    }
    if ca.min(cb) <= DIRECT_LIMIT {
        return if ca <= cb { direct(a, b) } else { direct(b, a) };
    }
    fft(a, b).unwrap_or_else(|| direct(a, b))
}

/// OR of `b` shifted by each member of `sparse`, on 64-bit words.
fn direct(sparse: &[bool], b: &[bool]) -> Vec<bool> {
    let len = sparse.len() + b.len() - 1;
    let words = len.div_ceil(64) + 1;
    let mut bw = vec![0u64; b.len().div_ceil(64) + 1];
    for (i, &x) in b.iter().enumerate() {
        if x {
            bw[i / 64] |= 1 << (i % 64);
        }
    }
    let mut out = vec![0u64; words];
    for (s, _) in sparse.iter().enumerate().filter(|(_, &x)| x) {
        let (w, r) = (s / 64, s % 64);
        for (k, &word) in bw.iter().enumerate() {
            if word == 0 {
                continue;
            }
            out[w + k] |= word << r;
            if r != 0 && w + k + 1 < words {
                out[w + k + 1] |= word >> (64 - r);
            }
        }
    }
    (0..len).map(|i| out[i / 64] >> (i % 64) & 1 == 1).collect()
}

/// Counting convolution by FFT; `None` if rounding is not clearly safe.
fn fft(a: &[bool], b: &[bool]) -> Option<Vec<bool>> {
    let len = a.len() + b.len() - 1;
    let n = len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let load = |v: &[bool]| {
        let mut buf = vec![Complex::new(0.0, 0.0); n];
        for (slot, &x) in buf.iter_mut().zip(v) {
            if x {
                slot.re = 1.0;
            }
        }
        buf
    };
    let mut fa = load(a);
    let mut fb = load(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / n as f64;
    let mut out = Vec::with_capacity(len);
    for c in &fa[..len] {
        let v = c.re * scale;
        let r = v.round();
        if (v - r).abs() > 0.25 {
            return None;
        }
        out.push(r >= 1.0);
    }
    Some(out)
}
