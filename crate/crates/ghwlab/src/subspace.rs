//! Canonical enumeration of F_q-subspaces: every r-dimensional subspace of
//! F_q^k appears exactly once as a reduced row-echelon basis. The stream
//! is partitioned by pivot-column set, which is also the unit of work for
//! the parallel oracle.

use crate::error::GhwError;
use crate::field::SubfieldTable;

/// An r-dimensional subspace of F_q^k in canonical RREF form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub k: usize,
    pub rows: Vec<Vec<u16>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Number of r-dimensional subspaces of F_q^k.
pub fn gaussian_binomial(q: u64, k: usize, r: usize) -> u128 {
    if r > k {
        return 0;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 1..=r {
        // partial products are themselves q-binomials, so division is exact
        acc *= q.pow((k - r + i) as u32) - 1;
        acc /= q.pow(i as u32) - 1;
    }
    acc
}

/// All r-subsets of 0..k in lexicographic order.
pub fn pivot_sets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..k {
            cur.push(c);
            rec(c + 1, k, r, cur, out);
            cur.pop();
        }
    }
    rec(0, k, r, &mut cur, &mut out);
    out
}

/// Positions of the free entries of an RREF matrix with the given pivots,
/// row-major: row i is free at columns past its pivot that are not pivots.
pub fn free_positions(k: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for c in p + 1..k {
            if !pivots.contains(&c) {
                out.push((i, c));
            }
        }
    }
    out
}

/// The RREF matrix for one pivot set and one assignment index in
/// 0..q^{#free}; the index unpacks base q onto the free positions.
pub fn subspace_at(q: u64, k: usize, pivots: &[usize], mut index: u128) -> Subspace {
    let r = pivots.len();
    let mut rows = vec![vec![0u16; k]; r];
    for (i, &p) in pivots.iter().enumerate() {
        rows[i][p] = 1;
    }
    for &(i, c) in &free_positions(k, pivots) {
        rows[i][c] = (index % q as u128) as u16;
        index /= q as u128;
    }
    Subspace {
        k,
        rows,
        pivots: pivots.to_vec(),
    }
}

/// One block of the enumeration: everything sharing a pivot set.
#[derive(Clone, Debug)]
pub struct PivotBlock {
    pub pivots: Vec<usize>,
    pub count: u128,
    /// Position of this block's first subspace in the global stream.
    pub offset: u128,
}

pub fn pivot_blocks(q: u64, k: usize, r: usize) -> Vec<PivotBlock> {
    let mut out = Vec::new();
    let mut offset: u128 = 0;
    for pivots in pivot_sets(k, r) {
        let count = (q as u128).pow(free_positions(k, &pivots).len() as u32);
        out.push(PivotBlock {
            pivots,
            count,
            offset,
        });
        offset += count;
    }
    out
}

/// Sequential stream over every r-dimensional subspace of F_q^k, in the
/// canonical block order. Fails up front when the total exceeds `cap`.
pub fn enumerate(
    q: u64,
    k: usize,
    r: usize,
    cap: u128,
) -> Result<impl Iterator<Item = Subspace>, GhwError> {
    if r > k {
        return Err(GhwError::RankOutOfRange { r, k });
    }
    let total = gaussian_binomial(q, k, r);
    if total > cap {
        return Err(GhwError::CapExceeded { needed: total, cap });
    }
    let blocks = pivot_blocks(q, k, r);
    Ok(blocks.into_iter().flat_map(move |b| {
        (0..b.count).map(move |i| subspace_at(q, k, &b.pivots, i))
    }))
}

/// Reduce arbitrary rows to the canonical RREF subspace they span.
pub fn rref(table: &SubfieldTable, rows: Vec<Vec<u16>>) -> Subspace {
    let k = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut mat = rows;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(pr) = (row..mat.len()).find(|&i| mat[i][col] != 0) else {
            continue;
        };
        mat.swap(row, pr);
        let inv = table.inv(mat[row][col]);
        for c in 0..k {
            mat[row][c] = table.mul(mat[row][c], inv);
        }
        for i in 0..mat.len() {
            if i != row && mat[i][col] != 0 {
                let f = mat[i][col];
                for c in 0..k {
                    let sub = table.mul(f, mat[row][c]);
                    mat[i][c] = table.sub(mat[i][c], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == mat.len() {
            break;
        }
    }
    mat.truncate(row);
    Subspace {
        k,
        rows: mat,
        pivots,
    }
}

/// Canonical basis of {y : M y = 0} in F_q^k.
pub fn nullspace(table: &SubfieldTable, mat: &[Vec<u16>], k: usize) -> Subspace {
    let red = rref(table, mat.to_vec());
    let pivots = red.pivots.clone();
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![0u16; k];
        v[fc] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = table.neg(red.rows[i][fc]);
        }
        basis.push(v);
    }
    let mut out = rref(table, basis);
    out.k = k;
    out
}

/// Membership test against an RREF basis.
pub fn contains(table: &SubfieldTable, sub: &Subspace, v: &[u16]) -> bool {
    let mut v = v.to_vec();
    for (row, &p) in sub.rows.iter().zip(&sub.pivots) {
        if v[p] != 0 {
            let f = v[p];
            for c in 0..sub.k {
                let s = table.mul(f, row[c]);
                v[c] = table.sub(v[c], s);
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use std::collections::HashSet;

    #[test]
    fn counts_match_gaussian_binomial() {
        assert_eq!(gaussian_binomial(2, 3, 1), 7);
        assert_eq!(gaussian_binomial(3, 4, 2), 130);
        assert_eq!(gaussian_binomial(9, 4, 2), 7462);
        for (q, k) in [(2u64, 4usize), (3, 4), (2, 5)] {
            for r in 0..=k {
                let got = enumerate(q, k, r, 1 << 30).unwrap().count() as u128;
                assert_eq!(got, gaussian_binomial(q, k, r), "q={q} k={k} r={r}");
            }
        }
    }

    #[test]
    fn zero_rank_is_single_empty_space() {
        let subs: Vec<_> = enumerate(3, 4, 0, 10).unwrap().collect();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].dim(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate(3, 4, 2, 100),
            Err(GhwError::CapExceeded { needed: 130, cap: 100 })
        ));
    }

    #[test]
    fn subspaces_are_distinct_canonical() {
        let f = build_field(3, 1, 1).unwrap();
        let t = f.subfield();
        let mut seen = HashSet::new();
        for s in enumerate(3, 4, 2, 1 << 20).unwrap() {
            let re = rref(t, s.rows.clone());
            assert_eq!(re, s, "not canonical");
            assert!(seen.insert(s.rows.clone()), "duplicate subspace");
        }
        assert_eq!(seen.len(), 130);
    }

    #[test]
    fn nullspace_dimensions() {
        let f = build_field(3, 1, 1).unwrap();
        let t = f.subfield();
        let mat = vec![vec![1u16, 2, 0, 1], vec![0, 1, 1, 2]];
        let ns = nullspace(t, &mat, 4);
        assert_eq!(ns.dim(), 2);
        for v in &ns.rows {
            for row in &mat {
                let mut acc = 0u16;
                for (a, b) in row.iter().zip(v) {
                    acc = t.add(acc, t.mul(*a, *b));
                }
                assert_eq!(acc, 0);
            }
        }
    }

    #[test]
    fn rref_membership() {
        let f = build_field(2, 1, 1).unwrap();
        let t = f.subfield();
        let s = rref(t, vec![vec![1, 1, 0], vec![0, 1, 1]]);
        assert!(contains(t, &s, &[1, 0, 1]));
        assert!(!contains(t, &s, &[1, 0, 0]));
    }
}
