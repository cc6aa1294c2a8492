//! Division-free determinants for matrices over a commutative ring.
//!
//! Coefficients live in a truncated ring that is not an integral domain, so
//! fraction-based elimination is unsound. Instead we expand along rows with
//! memoization over column subsets: `O(2^n * n)` ring multiplications.

/// Minimal ring surface needed by the determinant.
pub(crate) trait DetRing: Clone {
    fn zero_like(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_is_zero(&self) -> bool;
}

/// Determinant of a square matrix (`n >= 1`).
pub(crate) fn determinant<T: DetRing>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    assert!(n >= 1, "determinant of an empty matrix");
    assert!(
        matrix.iter().all(|row| row.len() == n),
        "matrix must be square"
    );
    assert!(n <= 20, "subset-DP determinant limited to n <= 20");

    let zero = matrix[0][0].zero_like();
    // minor[s] = det of the submatrix on rows 0..popcount(s), columns in s
    let mut minors: Vec<Option<T>> = vec![None; 1usize << n];
    minors[0] = Some({
        // det of the empty matrix is 1; synthesized lazily below instead,
        // by treating |s| = 1 as the base case.
        zero.clone()
    });
    for s in 1usize..(1 << n) {
        let row = (s as u32).count_ones() as usize - 1;
        let mut acc = zero.clone();
        let mut position = 0usize;
        for (col, entry) in matrix[row].iter().enumerate() {
            if s & (1 << col) == 0 {
                continue;
            }
            if !entry.ring_is_zero() {
                let rest = s & !(1 << col);
                let sub = if rest == 0 {
                    None
                } else {
                    Some(minors[rest].as_ref().expect("minor computed").clone())
                };
                let contribution = match sub {
                    None => entry.clone(),
                    Some(sub) => entry.ring_mul(&sub),
                };
                // expansion along the last row of the submatrix
                if (row + position).is_multiple_of(2) {
                    acc = acc.ring_add(&contribution);
                } else {
                    acc = acc.ring_sub(&contribution);
                }
            }
            position += 1;
        }
        minors[s] = Some(acc);
    }
    minors[(1 << n) - 1].take().expect("full minor computed")
}
