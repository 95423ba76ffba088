//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use skrates::rational::{int, ratio};
use skrates::{HypergraphSource, Rational};

fn ids(m: usize) -> Vec<String> {
    (1..=m).map(|i| i.to_string()).collect()
}

/// Connected PIN: a random spanning tree plus up to `extra` further pairs
/// (parallel edges allowed), integer weights in `1..=max_w`.
pub fn connected_pin(rng: &mut StdRng, m: usize, max_w: i64, extra: usize) -> HypergraphSource {
    let v = ids(m);
    let mut edges = Vec::new();
    for k in 1..m {
        let j = rng.gen_range(0..k);
        edges.push((j, k));
    }
    for _ in 0..rng.gen_range(0..=extra) {
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        edges.push((a.min(b), a.max(b)));
    }
    let edges: Vec<_> = edges
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| (format!("e{k}"), vec![v[a].clone(), v[b].clone()], int(rng.gen_range(1..=max_w))))
        .collect();
    HypergraphSource::new(v, edges).unwrap()
}

/// PIN whose weight support is a random spanning tree.
pub fn tree_pin(rng: &mut StdRng, m: usize, max_w: i64) -> HypergraphSource {
    connected_pin(rng, m, max_w, 0)
}

/// Hypergraph with up to `max_edges` random nonempty edges and entropies in halves.
pub fn hypergraph(rng: &mut StdRng, m: usize, max_edges: usize) -> HypergraphSource {
    let v = ids(m);
    let count = rng.gen_range(1..=max_edges);
    let edges: Vec<_> = (0..count)
        .map(|k| {
            let mask = rng.gen_range(1u32..(1 << m));
            let members = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| v[i].clone()).collect();
            (format!("e{k}"), members, ratio(rng.gen_range(1..=6), 2))
        })
        .collect();
    HypergraphSource::new(v, edges).unwrap()
}

/// Random rational in `[0, max]` with denominator dividing `den`.
pub fn rational(rng: &mut StdRng, max: i64, den: i64) -> Rational {
    ratio(rng.gen_range(0..=max * den), den)
}

/// Table of a random submodular function on `n` elements: a nonnegative
/// combination of truncated cardinalities `min(|B ∩ T|, c)` and coverage terms.
pub fn submodular_table(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    let mut terms: Vec<(u64, u32, Rational)> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let t = rng.gen_range(1u64..(1 << n));
        let cap = rng.gen_range(1..=t.count_ones());
        terms.push((t, cap, rational(rng, 3, 2)));
    }
    let colours: Vec<(u64, Rational)> = (0..rng.gen_range(0..=3))
        .map(|_| (rng.gen_range(1u64..(1 << n)), rational(rng, 2, 3)))
        .collect();
    (0..1u64 << n)
        .map(|b| {
            let trunc: Rational = terms
                .iter()
                .map(|(t, c, a)| a * int((b & t).count_ones().min(*c) as i64))
                .sum();
            // a colour is covered when B meets its holder set
            let cover: Rational = colours.iter().filter(|(h, _)| b & h != 0).map(|(_, a)| a.clone()).sum();
            trunc + cover
        })
        .collect()
}
