//! The subspace oracle: exhaustive computation of generalized weights by
//! counting vanishing coordinates over every message subspace, plus the
//! exact period-sum route to the same count.

use crate::code::CyclicCode;
use crate::cyclotomy::CycInt;
use crate::error::GhwError;
use crate::subspace::{self, PivotBlock, Subspace};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of coordinates on which every codeword of the message subspace
/// vanishes. The subspace lives in the ambient message space F_q^{tm}.
pub fn count_vanishing(code: &CyclicCode, sub: &Subspace) -> usize {
    let table = code.spec().subfield();
    code.columns()
        .iter()
        .filter(|col| {
            sub.rows.iter().all(|row| {
                let mut acc = 0u16;
                for (&a, &b) in row.iter().zip(col.iter()) {
                    acc = table.add(acc, table.mul(a, b));
                }
                acc == 0
            })
        })
        .count()
}

/// The same count through the exact character-sum identity: an average of
/// period values over the subspace and the e-th power classes. Everything
/// stays in Z[ζ_p]; the final division must be exact.
pub fn count_vanishing_periods(code: &CyclicCode, sub: &Subspace) -> Result<u64, GhwError> {
    let spec = code.spec();
    let d = code.derived();
    let e = code.params().e;
    let t = code.params().t;
    let n_classes = d.class_count;
    let q = spec.q();
    let r = sub.dim();
    if !d.divisibility_ok {
        return Err(GhwError::HypothesisNotMet(
            "e does not divide the code length".into(),
        ));
    }

    // per-slot powers β_j^h and g^h for h = 1..e
    let mut beta_h: Vec<Vec<crate::field::Fe>> = Vec::with_capacity(e as usize);
    let mut g_h = Vec::with_capacity(e as usize);
    for h in 1..=e {
        beta_h.push((0..t).map(|j| spec.pow(d.beta_pows[j], h)).collect());
        g_h.push(spec.pow(d.g, h));
    }

    let mut zero_tally: i64 = 0;
    let mut class_tally = vec![0i64; n_classes as usize];
    let mut coeffs = vec![0u16; r];
    loop {
        let mut v = vec![0u16; sub.k];
        let table = spec.subfield();
        for (ci, row) in coeffs.iter().zip(&sub.rows) {
            for (slot, &x) in v.iter_mut().zip(row) {
                *slot = table.add(*slot, table.mul(*ci, x));
            }
        }
        let b = code.coords_to_message(&v);
        for h in 0..e as usize {
            let mut arg = crate::field::Fe::ZERO;
            for j in 0..t {
                arg = spec.add(arg, spec.mul(b[j], beta_h[h][j]));
            }
            arg = spec.mul(g_h[h], arg);
            if arg.is_zero() {
                zero_tally += 1;
            } else {
                let l = spec.discrete_log(arg).unwrap();
                class_tally[(l % n_classes) as usize] += 1;
            }
        }
        let mut i = 0;
        while i < r {
            coeffs[i] += 1;
            if (coeffs[i] as u64) < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }

    let periods = code.periods();
    let mut total = CycInt::from_int(spec.p(), zero_tally * periods.at_zero);
    for (i, &c) in class_tally.iter().enumerate() {
        total.add_assign(&periods.by_class[i].scale(c));
    }
    let sum = total.as_int().ok_or(GhwError::NonIntegerCount)?;
    let num = n_classes as i128 * sum as i128;
    let den = e as i128 * d.delta_gcd as i128 * (q as i128).pow(r as u32);
    if num % den != 0 || num / den < 0 {
        return Err(GhwError::NonIntegerCount);
    }
    Ok((num / den) as u64)
}

/// Result of one oracle run at a fixed rank.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub r: usize,
    /// Largest number of commonly vanishing coordinates over all rank-r
    /// message subspaces.
    pub max_vanishing: usize,
    /// d_r = n - max_vanishing.
    pub d: u64,
    /// First maximizer in the canonical enumeration order.
    pub witness: Subspace,
    /// Total number of subspaces inspected.
    pub searched: u128,
}

fn block_best(code: &CyclicCode, q: u64, k: usize, block: &PivotBlock) -> (usize, u128) {
    let mut best = 0usize;
    let mut best_idx = block.offset;
    for i in 0..block.count {
        let s = subspace::subspace_at(q, k, &block.pivots, i);
        let v = count_vanishing(code, &s);
        if v > best {
            best = v;
            best_idx = block.offset + i;
        }
    }
    (best, best_idx)
}

fn pick(a: (usize, u128), b: (usize, u128)) -> (usize, u128) {
    // larger count wins; ties go to the earlier stream position
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Exhaustive d_r computation. Deterministic: the witness is always the
/// first maximizer in canonical order, whether or not workers run in
/// parallel.
pub fn ghw_bruteforce(code: &CyclicCode, r: usize, cap: u128) -> Result<OracleOutcome, GhwError> {
    let k = code.dimension();
    if r < 1 || r > k {
        return Err(GhwError::RankOutOfRange { r, k });
    }
    let q = code.spec().q();
    let total = subspace::gaussian_binomial(q, k, r);
    if total > cap {
        return Err(GhwError::CapExceeded { needed: total, cap });
    }
    let blocks = subspace::pivot_blocks(q, k, r);

    #[cfg(feature = "parallel")]
    let (best, best_idx) = blocks
        .par_iter()
        .map(|b| block_best(code, q, k, b))
        .reduce(|| (0usize, u128::MAX), pick);
    #[cfg(not(feature = "parallel"))]
    let (best, best_idx) = blocks
        .iter()
        .map(|b| block_best(code, q, k, b))
        .fold((0usize, u128::MAX), pick);

    let owner = blocks
        .iter()
        .rfind(|b| b.offset <= best_idx)
        .expect("winning block");
    let witness = subspace::subspace_at(q, k, &owner.pivots, best_idx - owner.offset);
    Ok(OracleOutcome {
        r,
        max_vanishing: best,
        d: code.derived().length - best as u64,
        witness,
        searched: total,
    })
}

/// Sequential twin of [`ghw_bruteforce`] regardless of the feature set;
/// exists so the two paths can be compared directly.
pub fn ghw_bruteforce_seq(
    code: &CyclicCode,
    r: usize,
    cap: u128,
) -> Result<OracleOutcome, GhwError> {
    let k = code.dimension();
    if r < 1 || r > k {
        return Err(GhwError::RankOutOfRange { r, k });
    }
    let q = code.spec().q();
    let total = subspace::gaussian_binomial(q, k, r);
    if total > cap {
        return Err(GhwError::CapExceeded { needed: total, cap });
    }
    let blocks = subspace::pivot_blocks(q, k, r);
    let (best, best_idx) = blocks
        .iter()
        .map(|b| block_best(code, q, k, b))
        .fold((0usize, u128::MAX), pick);
    let owner = blocks
        .iter()
        .rfind(|b| b.offset <= best_idx)
        .expect("winning block");
    let witness = subspace::subspace_at(q, k, &owner.pivots, best_idx - owner.offset);
    Ok(OracleOutcome {
        r,
        max_vanishing: best,
        d: code.derived().length - best as u64,
        witness,
        searched: total,
    })
}

/// Full oracle hierarchy d_1 < ... < d_k.
pub fn hierarchy_bruteforce(code: &CyclicCode, cap: u128) -> Result<Vec<u64>, GhwError> {
    (1..=code.dimension())
        .map(|r| ghw_bruteforce(code, r, cap).map(|o| o.d))
        .collect()
}

/// Pairing of two ambient coordinate vectors under the trace form.
pub fn pairing(code: &CyclicCode, gram: &[Vec<u16>], x: &[u16], y: &[u16]) -> u16 {
    let t = code.spec().subfield();
    let mut acc = 0u16;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            acc = t.add(acc, t.mul(t.mul(xi, yj), gram[i][j]));
        }
    }
    acc
}

/// Orthogonal complement of a message subspace under the trace form.
pub fn dual_space(code: &CyclicCode, sub: &Subspace) -> Subspace {
    let table = code.spec().subfield();
    let gram = code.gram();
    let k = sub.k;
    // rows of (sub.rows · G) cut out the complement
    let mat: Vec<Vec<u16>> = sub
        .rows
        .iter()
        .map(|row| {
            (0..k)
                .map(|c| {
                    let mut acc = 0u16;
                    for (i, &x) in row.iter().enumerate() {
                        acc = table.add(acc, table.mul(x, gram[i][c]));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    subspace::nullspace(table, &mat, k)
}
