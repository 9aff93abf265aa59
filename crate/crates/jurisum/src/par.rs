//! Order-preserving data-parallel maps.
//!
//! With the `parallel` feature (default) these fan out over rayon; without
//! it they run sequentially. Results are collected in input order and all
//! reductions happen on the caller side in input order, so outputs are
//! identical regardless of feature flags or thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, preserving input order in the output.
#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Fallible ordered map; returns the first error by input order.
#[cfg(feature = "parallel")]
pub fn try_map_ordered<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    let results: Vec<Result<U, E>> = items.par_iter().map(f).collect();
    results.into_iter().collect()
}

/// Fallible ordered map; returns the first error by input order.
#[cfg(not(feature = "parallel"))]
pub fn try_map_ordered<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    F: Fn(&T) -> Result<U, E>,
{
    items.iter().map(f).collect()
}

/// Always-sequential variant, kept for benchmark comparisons against the
/// parallel path.
pub fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_map_preserves_order() {
        let items: Vec<usize> = (0..1000).collect();
        let out = map_ordered(&items, |x| x * 2);
        let expected: Vec<usize> = items.iter().map(|x| x * 2).collect();
        assert_eq!(out, expected);
        assert_eq!(map_ordered_seq(&items, |x| x * 2), expected);
    }

    #[test]
    fn try_map_surfaces_first_error() {
        let items: Vec<usize> = (0..100).collect();
        let res: Result<Vec<usize>, usize> =
            try_map_ordered(&items, |&x| if x >= 40 { Err(x) } else { Ok(x) });
        assert_eq!(res.unwrap_err(), 40);
    }
}
