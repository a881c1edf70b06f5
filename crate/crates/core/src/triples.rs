//! Lexicographic indexing of 3-subsets `i < j < k` of `0..n`.

/// Number of 3-subsets of an `n`-set.
pub fn count(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn choose2(m: usize) -> usize {
    if m < 2 {
        0
    } else {
        m * (m - 1) / 2
    }
}

/// Position of the sorted triple `(i, j, k)` in lexicographic order.
pub fn rank(n: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k && k < n);
    // triples whose smallest element is < i
    let before_i = count(n) - count(n - i);
    // triples (i, b, *) with i < b < j
    let before_j = choose2(n - i - 1) - choose2(n - j);
    before_i + before_j + (k - j - 1)
}

/// All sorted triples in lexicographic order.
pub fn iter(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
}

/// Sorts three distinct indices and returns the parity of the sorting
/// permutation: `+1` for even, `-1` for odd.
pub fn sort_with_parity(a: usize, b: usize, c: usize) -> ([usize; 3], i8) {
    let mut t = [a, b, c];
    let mut parity = 1i8;
    if t[0] > t[1] {
        t.swap(0, 1);
        parity = -parity;
    }
    if t[1] > t[2] {
        t.swap(1, 2);
        parity = -parity;
    }
    if t[0] > t[1] {
        t.swap(0, 1);
        parity = -parity;
    }
    (t, parity)
}
