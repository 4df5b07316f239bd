//! Flat-index helpers for dense 3- and 4-index arrays.

#[inline]
pub(crate) fn idx3(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

#[inline]
pub(crate) fn idx4(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Sign of the permutation that sorts `idx`, or 0 if an index repeats.
pub(crate) fn permutation_sign(idx: &[usize]) -> i32 {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return 0;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// All permutations of `0..k` with their signs.
pub(crate) fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out.into_iter()
        .map(|p| {
            let s = permutation_sign(&p);
            (p, s)
        })
        .collect()
}

/// Iterate over all multi-indices in `0..n` of length `k`, in row-major order.
pub(crate) fn multi_indices(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; k];
        for slot in (0..k).rev() {
            idx[slot] = flat % n;
            flat /= n;
        }
        idx
    })
}
