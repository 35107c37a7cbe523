//! Dense polynomials over the mid field F_q, coefficients as subfield
//! indices, low degree first. The zero polynomial is the empty vector.

use crate::field::SubfieldTable;

pub fn trim(v: &mut Vec<u16>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn degree(a: &[u16]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn mul(t: &SubfieldTable, a: &[u16], b: &[u16]) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u16; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = t.add(out[i + j], t.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor.
pub fn divrem(t: &SubfieldTable, num: &[u16], den: &[u16]) -> (Vec<u16>, Vec<u16>) {
    assert!(!den.is_empty(), "division by the zero polynomial");
    let mut r = num.to_vec();
    trim(&mut r);
    let lead_inv = t.inv(*den.last().unwrap());
    let mut quo = vec![0u16; r.len().saturating_sub(den.len() - 1)];
    while !r.is_empty() && r.len() >= den.len() {
        let shift = r.len() - den.len();
        let c = t.mul(*r.last().unwrap(), lead_inv);
        quo[shift] = c;
        for (i, &dc) in den.iter().enumerate() {
            r[shift + i] = t.sub(r[shift + i], t.mul(c, dc));
        }
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

/// x^n - 1 over F_q.
pub fn x_pow_minus_one(t: &SubfieldTable, n: usize) -> Vec<u16> {
    let mut v = vec![0u16; n + 1];
    v[0] = t.neg(t.one());
    v[n] = t.one();
    v
}
