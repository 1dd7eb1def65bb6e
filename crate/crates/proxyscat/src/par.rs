//! Thin dispatch layer between the rayon data-parallel core and the
//! sequential fallback selected by disabling the `parallel` feature.
//!
//! Hot loops in this crate fill independent chunks of a flat output buffer
//! (matrix rows, quadrature nodes, grid points). The `*_seq` variants are
//! always compiled; they are the reference path the benchmarks compare
//! against.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Fill `out` chunk by chunk, `f(chunk_index, chunk)`.
pub fn fill_chunks<T, F>(out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    assert!(chunk > 0);
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    fill_chunks_seq(out, chunk, f);
}

/// Sequential twin of [`fill_chunks`].
pub fn fill_chunks_seq<T, F>(out: &mut [T], chunk: usize, f: F)
where
    F: Fn(usize, &mut [T]),
{
    assert!(chunk > 0);
    out.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Map `0..n` and sum the results.
pub fn map_reduce_sum<F>(n: usize, f: F) -> num_complex::Complex64
where
    F: Fn(usize) -> num_complex::Complex64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| num_complex::Complex64::new(0.0, 0.0), |a, b| a + b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(num_complex::Complex64::new(0.0, 0.0), |a, b| a + b)
    }
}
