//! Reference computations shared by the integration tests. Nothing here
//! calls into the library's polynomial or linear algebra code.
#![allow(dead_code)]

use std::path::PathBuf;

use sheafmonad_cli::{run, Outcome};

const P: u64 = 32003;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn schema_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.json"))
}

pub fn cli(args: &[&str]) -> Outcome {
    cli_stdin(args, "")
}

pub fn cli_stdin(args: &[&str], input: &str) -> Outcome {
    let mut argv = vec!["sheafmonad".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(&argv, &mut input.as_bytes())
}

/// Exponent vectors of degree `d` in `vars` variables, lexicographic.
fn monomials(vars: usize, d: i64) -> Vec<Vec<u32>> {
    if d < 0 {
        return Vec::new();
    }
    fn go(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            go(vars - 1, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(vars, d as u32, &mut Vec::new(), &mut out);
    out
}

/// Subsets of `0..n` of size `k` as sorted vectors.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c], P - 2);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % P;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot) {
                    *v = (*v + P * P - f * pv) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn forms(vars: usize, d: i64) -> usize {
    if d < 0 {
        0
    } else {
        binom(vars - 1 + d as usize, vars - 1)
    }
}

/// Rank of `∧^k V ⊗ S_s → ∧^{k-1} V ⊗ S_{s+1}`,
/// `e_I ⊗ f ↦ Σ_j (-1)^j e_{I∖i_j} ⊗ x_{i_j} f`.
fn contraction_rank(vars: usize, k: usize, s: i64) -> usize {
    if k == 0 || s < 0 {
        return 0;
    }
    wedge_like_rank(vars, k, k - 1, s, |src, tgt| {
        src.iter().enumerate().filter_map(|(j, &i)| {
            let rest: Vec<usize> = src.iter().copied().filter(|&x| x != i).collect();
            (rest == tgt).then_some((i, j % 2 == 1))
        }).next()
    })
}

/// Rank of `∧^{k-1} V ⊗ S_u → ∧^k V ⊗ S_{u+1}`,
/// `e_J ⊗ f ↦ Σ_i e_i ∧ e_J ⊗ x_i f`.
fn wedge_rank(vars: usize, k: usize, u: i64) -> usize {
    if k == 0 || k > vars || u < 0 {
        return 0;
    }
    wedge_like_rank(vars, k - 1, k, u, |src, tgt| {
        let extra: Vec<usize> = tgt.iter().copied().filter(|x| !src.contains(x)).collect();
        if extra.len() != 1 {
            return None;
        }
        let i = extra[0];
        let before = src.iter().filter(|&&x| x < i).count();
        Some((i, before % 2 == 1))
    })
}

/// Matrix whose `(tgt, src)` entry is `±1` at monomial `x_i m` when
/// `link(src_subset, tgt_subset)` returns `(i, negative)`.
fn wedge_like_rank(
    vars: usize,
    k_src: usize,
    k_tgt: usize,
    deg: i64,
    link: impl Fn(&[usize], &[usize]) -> Option<(usize, bool)>,
) -> usize {
    let src_mon = monomials(vars, deg);
    let tgt_mon = monomials(vars, deg + 1);
    let src_sub = subsets(vars, k_src);
    let tgt_sub = subsets(vars, k_tgt);
    let tgt_index = |sub: usize, mon: &[u32]| sub * tgt_mon.len() + tgt_mon.iter().position(|m| m == mon).unwrap();
    let mut cols = Vec::new();
    for s in &src_sub {
        for m in &src_mon {
            let mut col = vec![0u64; tgt_sub.len() * tgt_mon.len()];
            for (ti, t) in tgt_sub.iter().enumerate() {
                if let Some((i, negative)) = link(s, t) {
                    let mut mm = m.clone();
                    mm[i] += 1;
                    col[tgt_index(ti, &mm)] = if negative { P - 1 } else { 1 };
                }
            }
            cols.push(col);
        }
    }
    if cols.is_empty() || cols[0].is_empty() {
        return 0;
    }
    rank_mod_p(cols)
}

/// `h^q(P^n, Ω^p(t))` from the resolution
/// `0 → Ω^p(t) → ∧^p V ⊗ O(t-p) → … → V ⊗ O(t-1) → O(t) → 0`.
/// Only rows 0 and `n` of the hypercohomology spectral sequence are
/// non-zero, and no differential reaches between them, so each row is
/// computed as the cohomology of the complex of global sections (row 0) or
/// of top cohomology groups written through Serre duality (row `n`).
pub fn bott_oracle(n: usize, p: usize, q: usize, t: i64) -> u64 {
    let vars = n + 1;
    let a = |j: usize| t - p as i64 + j as i64;
    // Row 0: H^0(E^j) = ∧^{p-j} ⊗ S_{a_j}.
    let h0 = |j: usize| binom(vars, p - j) * forms(vars, a(j));
    let d0 = |j: usize| if j < p { contraction_rank(vars, p - j, a(j)) } else { 0 };
    let row0 = |j: usize| h0(j) - d0(j) - if j > 0 { d0(j - 1) } else { 0 };
    // Row n: H^n(E^j) = (∧^{p-j} ⊗ S_{-a_j-n-1})^∨.
    let hn = |j: usize| binom(vars, p - j) * forms(vars, -a(j) - n as i64 - 1);
    let dn = |j: usize| if j < p { wedge_rank(vars, p - j, -a(j) - n as i64 - 2) } else { 0 };
    let rown = |j: usize| hn(j) - dn(j) - if j > 0 { dn(j - 1) } else { 0 };
    let mut h = 0;
    if q <= p {
        h += row0(q);
    }
    if n > 0 && q >= n && q - n <= p {
        h += rown(q - n);
    }
    h as u64
}

/// `h^0` and `h^1` of `O_L(b)` for a line `L`.
pub fn line_h(b: i64) -> (u64, u64) {
    ((b + 1).max(0) as u64, (-b - 1).max(0) as u64)
}

/// Checks `stdout` (one JSON document) against a shipped schema.
pub fn assert_schema(name: &str, stdout: &str) -> serde_json::Value {
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let value: serde_json::Value = serde_json::from_str(stdout).unwrap_or_else(|e| panic!("{name}: {e}: {stdout}"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?} in {stdout}");
    value
}

pub fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}
