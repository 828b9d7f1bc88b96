//! GF(2) rank of small symmetric matrices stored as `u64` bit-rows.
//!
//! Two independent routines are provided so each can serve as an oracle for
//! the other: greedy basis extraction and explicit Gaussian row reduction.

/// Rank by greedy basis extraction: reduce each row against the basis
/// collected so far and insert it if anything is left.
pub fn rank_greedy(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if r & pivot != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
        }
    }
    basis.len()
}

/// Rank by textbook Gaussian elimination with explicit pivot search,
/// row swaps and full column clearing.
pub fn rank_row_reduce(rows: &[u64]) -> usize {
    let mut m: Vec<u64> = rows.to_vec();
    let mut rank = 0;
    for col in 0..64u32 {
        let bit = 1u64 << col;
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r] & bit != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for r in 0..m.len() {
            if r != rank && m[r] & bit != 0 {
                m[r] ^= m[rank];
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
