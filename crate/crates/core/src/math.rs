//! Small dense-vector helpers shared by the model and its oracles.
//!
//! The accumulation order inside each function is fixed, which keeps
//! results bit-reproducible run to run.

use crate::Real;

/// Dot product with four independent accumulators.
#[inline]
pub(crate) fn dot<R: Real>(a: &[R], b: &[R]) -> R {
    debug_assert_eq!(a.len(), b.len());
    let mut s0 = R::zero();
    let mut s1 = R::zero();
    let mut s2 = R::zero();
    let mut s3 = R::zero();
    for (ca, cb) in a.chunks_exact(4).zip(b.chunks_exact(4)) {
        s0 = s0 + ca[0] * cb[0];
        s1 = s1 + ca[1] * cb[1];
        s2 = s2 + ca[2] * cb[2];
        s3 = s3 + ca[3] * cb[3];
    }
    let ra = a.chunks_exact(4).remainder();
    let rb = b.chunks_exact(4).remainder();
    for (x, y) in ra.iter().zip(rb.iter()) {
        s0 = s0 + *x * *y;
    }
    (s0 + s1) + (s2 + s3)
}

/// `y += a * x`
#[inline]
pub(crate) fn axpy<R: Real>(y: &mut [R], a: R, x: &[R]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi = *yi + a * *xi;
    }
}

/// Euclidean norm.
#[inline]
pub(crate) fn norm<R: Real>(a: &[R]) -> R {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn add_assign<R: Real>(y: &mut [R], x: &[R]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi = *yi + *xi;
    }
}

/// `out = W x` for a square row-major `d x d` matrix.
#[inline]
pub(crate) fn matvec<R: Real>(w: &[R], x: &[R], out: &mut [R]) {
    let d = x.len();
    debug_assert_eq!(w.len(), d * d);
    debug_assert_eq!(out.len(), d);
    for (r, o) in out.iter_mut().enumerate() {
        *o = dot(&w[r * d..(r + 1) * d], x);
    }
}

/// `out += W^T x` for a square row-major `d x d` matrix.
#[inline]
pub(crate) fn matvec_transpose_acc<R: Real>(w: &[R], x: &[R], out: &mut [R]) {
    let d = x.len();
    debug_assert_eq!(w.len(), d * d);
    debug_assert_eq!(out.len(), d);
    for (r, &xr) in x.iter().enumerate() {
        if xr != R::zero() {
            axpy(out, xr, &w[r * d..(r + 1) * d]);
        }
    }
}

/// `dw += a b^T` (row-major outer product accumulation).
#[inline]
pub(crate) fn outer_acc<R: Real>(dw: &mut [R], a: &[R], b: &[R]) {
    let d = b.len();
    debug_assert_eq!(dw.len(), a.len() * d);
    for (r, &ar) in a.iter().enumerate() {
        if ar != R::zero() {
            axpy(&mut dw[r * d..(r + 1) * d], ar, b);
        }
    }
}
