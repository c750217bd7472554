//! Lexicographic k-subset enumeration shared by the exact searches.

/// Calls `f` for every size-`k` index subset of `0..pool_len` in lexicographic
/// order. `f` returns `false` to abort; the function reports whether the
/// enumeration ran to completion.
pub(crate) fn for_each_combination<F>(pool_len: usize, k: usize, f: &mut F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k > pool_len {
        return true;
    }
    if k == 0 {
        return f(&[]);
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + pool_len - k {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
