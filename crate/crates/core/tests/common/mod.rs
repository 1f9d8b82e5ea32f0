#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use zecmac::mac::{MacSpec, MixedRadix};
use zecmac::uv::{int_tuple, CondFamily, JointRange, Symbol, Tuple};
use zecmac::zec::{time_share, ZeCode, ZeDecoder};

pub const NAMES: [&str; 4] = ["A", "B", "C", "D"];

/// Random joint range over `vars` variables with alphabets of size
/// `1..=max_alpha` and a random nonempty support.
pub fn random_joint(rng: &mut impl Rng, vars: usize, max_alpha: usize) -> JointRange {
    let dims: Vec<usize> = (0..vars).map(|_| rng.random_range(1..=max_alpha)).collect();
    let density: f64 = rng.random_range(0.15..0.9);
    let mut support: Vec<Tuple> = MixedRadix::new(&dims)
        .filter(|_| rng.random_bool(density))
        .map(|d| int_tuple(&d.iter().map(|&v| v as i64).collect::<Vec<_>>()))
        .collect();
    if support.is_empty() {
        let d: Vec<i64> = dims.iter().map(|&k| rng.random_range(0..k) as i64).collect();
        support.push(int_tuple(&d));
    }
    JointRange::from_support(NAMES[..vars].iter().map(|s| s.to_string()).collect(), support).unwrap()
}

/// Splits the variables of `j` into two nonempty groups.
pub fn random_split<'a>(rng: &mut impl Rng, j: &'a JointRange) -> (Vec<&'a str>, Vec<&'a str>) {
    let vars: Vec<&str> = j.variables().iter().map(String::as_str).collect();
    let mut x = vec![vars[0]];
    let mut y = vec![vars[vars.len() - 1]];
    for &v in &vars[1..vars.len() - 1] {
        if rng.random_bool(0.5) {
            x.push(v);
        } else {
            y.push(v);
        }
    }
    (x, y)
}

/// Overlap partition by boolean transitive closure over the conditional
/// range sets, independent of the union-find implementation.
pub fn closure_blocks(family: &CondFamily) -> BTreeSet<BTreeSet<Tuple>> {
    let elems: Vec<Tuple> = family.target_range().into_iter().collect();
    let k = elems.len();
    let pos = |t: &Tuple| elems.iter().position(|e| e == t).unwrap();
    let mut reach = vec![vec![false; k]; k];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for set in family.map().values() {
        let idx: Vec<usize> = set.iter().map(pos).collect();
        for &a in &idx {
            for &b in &idx {
                reach[a][b] = true;
            }
        }
    }
    for m in 0..k {
        for a in 0..k {
            if reach[a][m] {
                for b in 0..k {
                    if reach[m][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    (0..k)
        .map(|a| (0..k).filter(|&b| reach[a][b]).map(|b| elems[b].clone()).collect())
        .collect()
}

/// `(Λ, Ω, Θ)` with `⟦Λ,Θ⟧ = ⟦Λ⟧ × ⟦Θ⟧` by construction and a random
/// nonempty set of `ω` for every `(λ, θ)`.
pub fn unrelated_triple(rng: &mut impl Rng, max_alpha: usize) -> JointRange {
    let (a, w, b) = (
        rng.random_range(1..=max_alpha),
        rng.random_range(1..=max_alpha),
        rng.random_range(1..=max_alpha),
    );
    let mut support = Vec::new();
    for l in 0..a {
        for t in 0..b {
            let mut any = false;
            for o in 0..w {
                if rng.random_bool(0.4) {
                    support.push(int_tuple(&[l as i64, o as i64, t as i64]));
                    any = true;
                }
            }
            if !any {
                let o = rng.random_range(0..w);
                support.push(int_tuple(&[l as i64, o as i64, t as i64]));
            }
        }
    }
    JointRange::from_support(vec!["L".into(), "O".into(), "T".into()], support).unwrap()
}

fn ints(k: usize) -> Vec<Symbol> {
    (0..k as i64).map(Symbol::Int).collect()
}

/// Two-user channel with a random deterministic table.
pub fn random_mac(rng: &mut impl Rng, max_alpha: usize) -> MacSpec {
    let a1 = rng.random_range(1..=max_alpha);
    let a2 = rng.random_range(1..=max_alpha);
    let q = rng.random_range(1..=max_alpha);
    let o = rng.random_range(1..=max_alpha);
    let table: Vec<usize> = (0..a1 * a2 * q).map(|_| rng.random_range(0..o)).collect();
    MacSpec::new(vec![ints(a1), ints(a2)], ints(q), ints(o), table).unwrap()
}

/// Unit-rate codes of the noiseless binary adder at `n = 1`: full
/// cooperation on the common message, or one free private user.
pub fn adder_unit(k: usize) -> ZeCode {
    let two = vec![vec![0], vec![1]];
    let one = vec![vec![0]];
    match k {
        0 => ZeCode::new(1, vec![2, 1, 1], vec![two.clone(), two], ""),
        1 => ZeCode::new(1, vec![1, 2, 1], vec![two, one], ""),
        _ => ZeCode::new(1, vec![1, 1, 2], vec![one, two], ""),
    }
    .unwrap()
}

/// Blocklength-3 code carrying one bit per message: one block of each unit code.
pub fn adder_third(mac: &MacSpec) -> ZeCode {
    let (_, ab) = time_share(&adder_unit(0), &adder_unit(1), 1, 1, mac).unwrap();
    time_share(&ab, &adder_unit(2), 1, 1, mac).unwrap().1
}

/// Checks that every message decodes to itself under every noise sequence.
pub fn decode_encode_identity(code: &ZeCode, mac: &MacSpec) -> Result<(), String> {
    let dec = ZeDecoder::new(code, mac).map_err(|e| e.to_string())?;
    let n = code.blocklength();
    let q = mac.noise_alphabet().len();
    for msg in code.messages() {
        let blocks = code.encode(&msg);
        for zs in MixedRadix::new(&vec![q; n]) {
            let y: Vec<usize> = (0..n)
                .map(|k| {
                    let xs: Vec<usize> = blocks.iter().map(|b| b[k]).collect();
                    mac.eval(&xs, zs[k])
                })
                .collect();
            let got = dec.decode(&y).map_err(|e| e.to_string())?;
            if got != msg {
                return Err(format!("message {msg:?} with noise {zs:?} decoded as {got:?}"));
            }
        }
    }
    Ok(())
}

pub fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).unwrap()
}
