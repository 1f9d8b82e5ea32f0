mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zecmac::mac::{
    extend_joint, extend_joint_with_noise, names, x_block_vars, y_block_vars, z_block_vars, InputProcess, MacSpec,
};
use zecmac::uv::{Symbol, Tuple};

use common::*;

/// Random input process with an optional common variable `U`.
fn random_process(r: &mut ChaCha8Rng, mac: &MacSpec, n: usize, with_u: bool) -> InputProcess {
    let rows_wanted = r.random_range(1..=6);
    let mut us = Vec::new();
    let mut rows: Vec<Vec<Tuple>> = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..rows_wanted {
        let u = Symbol::Int(r.random_range(0..3));
        let row: Vec<Tuple> = (0..2)
            .map(|j| {
                let a = mac.input_alphabet(j);
                (0..n).map(|_| a[r.random_range(0..a.len())].clone()).collect()
            })
            .collect();
        if seen.insert((u.clone(), row.clone())) {
            us.push(u);
            rows.push(row);
        }
    }
    InputProcess::from_rows(mac, n, with_u.then_some(us.as_slice()), &rows).unwrap()
}

fn x_vars(n: usize) -> Vec<String> {
    (1..=2).flat_map(|j| x_block_vars(j, n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extension_size(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mac = random_mac(&mut r, 3);
        let n = r.random_range(1..=2);
        let with_u = r.random_bool(0.5);
        let p = random_process(&mut r, &mac, n, with_u);
        let ext = extend_joint(&mac, &p).unwrap();
        let q = mac.noise_alphabet().len();
        let cap = p.joint.len() * q.pow(n as u32);
        prop_assert!(ext.len() <= cap);

        let xs = x_vars(n);
        let pos = p.joint.positions(&names(&xs)).unwrap();
        let injective = p.joint.support().iter().all(|t| {
            let blocks: Vec<Vec<usize>> = (0..2)
                .map(|j| (0..n).map(|k| mac.input_index(j, &t[pos[j * n + k]]).unwrap()).collect())
                .collect();
            let refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
            let mut outs = Vec::new();
            mac.for_each_output(&refs, |y| outs.push(y));
            let distinct: BTreeSet<u64> = outs.iter().copied().collect();
            distinct.len() == outs.len()
        });
        prop_assert_eq!(ext.len() == cap, injective);
    }

    #[test]
    fn common_variable_is_markov_through_inputs(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mac = random_mac(&mut r, 3);
        let n = r.random_range(1..=2);
        let p = random_process(&mut r, &mac, n, true);
        let ext = extend_joint(&mac, &p).unwrap();
        let xs = x_vars(n);
        let ys = y_block_vars(n);
        prop_assert!(ext.is_markov(&["U"], &names(&xs), &names(&ys)).unwrap());
    }

    #[test]
    fn noise_is_unrelated_to_inputs(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mac = random_mac(&mut r, 3);
        let n = r.random_range(1..=2);
        let with_u = r.random_bool(0.5);
        let p = random_process(&mut r, &mac, n, with_u);
        let ext = extend_joint_with_noise(&mac, &p).unwrap();
        let zs = z_block_vars(n);
        let mut inputs = x_vars(n);
        if with_u {
            inputs.push("U".into());
        }
        prop_assert!(ext.is_unrelated(&[&names(&zs), &names(&inputs)]).unwrap());
    }
}
