//! Set partitions and interval decompositions of `{0..n-1}` as bitmasks.

/// Set partitions into exactly `k` blocks, blocks sorted by their minimum.
pub fn set_partitions(n: usize, k: usize) -> Vec<Vec<u64>> {
    fn go(i: usize, n: usize, k: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == n {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        }
        // remaining elements must be able to fill the missing blocks
        if blocks.len() + (n - i) < k {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            go(i + 1, n, k, blocks, out);
            blocks[b] &= !(1 << i);
        }
        if blocks.len() < k {
            blocks.push(1 << i);
            go(i + 1, n, k, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Ordered set partitions into `k` nonempty blocks (all orderings of [`set_partitions`]).
pub fn ordered_partitions(n: usize, k: usize) -> Vec<Vec<u64>> {
    let perms = crate::exactmath::Permutation::all(k);
    let mut out = Vec::new();
    for p in set_partitions(n, k) {
        for s in &perms {
            out.push(s.images().iter().map(|&i| p[i]).collect());
        }
    }
    out
}

/// Decompositions of `0..n` into `k` consecutive nonempty intervals.
pub fn interval_partitions(n: usize, k: usize) -> Vec<Vec<u64>> {
    crate::trees::compositions(n, k)
        .into_iter()
        .map(|c| {
            let mut start = 0;
            c.into_iter()
                .map(|len| {
                    let m = ((1u64 << len) - 1) << start;
                    start += len;
                    m
                })
                .collect()
        })
        .collect()
}

/// Renumbers the bits of `mask` (a subset of `within`) to `0..popcount(within)`.
pub fn compress(mask: u64, within: u64) -> u64 {
    let mut out = 0;
    let mut k = 0;
    let mut w = within;
    while w != 0 {
        let bit = w & w.wrapping_neg();
        if mask & bit != 0 {
            out |= 1 << k;
        }
        k += 1;
        w &= w - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_counts() {
        // S(5,2) = 15, S(5,3) = 25, S(7,3) = 301
        assert_eq!(set_partitions(5, 2).len(), 15);
        assert_eq!(set_partitions(5, 3).len(), 25);
        assert_eq!(set_partitions(7, 3).len(), 301);
        assert_eq!(ordered_partitions(5, 3).len(), 150);
        for p in set_partitions(6, 3) {
            assert_eq!(p.iter().fold(0, |a, b| a | b), 0b11_1111);
            assert!(p.windows(2).all(|w| w[0].trailing_zeros() < w[1].trailing_zeros()));
        }
    }

    #[test]
    fn intervals() {
        assert_eq!(interval_partitions(3, 2), vec![vec![0b001, 0b110], vec![0b011, 0b100]]);
    }

    #[test]
    fn compress_renumbers() {
        assert_eq!(compress(0b1010_0100, 0b1011_0110), 0b1_1010);
        assert_eq!(compress(0, 0b111), 0);
    }
}
