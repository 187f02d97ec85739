use std::collections::BTreeMap;

use super::{AuxSpec, AuxVar, Capacity, Edge, NetworkSpec, Source};
use crate::dist::RandomVectorDistribution;

/// Three sources built from independent uniform bits `b0, b1, b2`:
/// `Y1 = (b0,b1)`, `Y2 = (b0,b2)`, `Y3 = (b1,b2)`, with symbols such as
/// `"01"`; and the auxiliary variables `K0 = b0`, `K1 = b1`, `K2 = b2`.
pub fn example_sources() -> (RandomVectorDistribution, AuxSpec) {
    let mut tuples = Vec::new();
    let mut maps = vec![BTreeMap::new(); 3];
    for v in 0..8u32 {
        let b = [v & 1, v >> 1 & 1, v >> 2 & 1];
        let t = vec![format!("{}{}", b[0], b[1]), format!("{}{}", b[0], b[2]), format!("{}{}", b[1], b[2])];
        let key = t.join(",");
        for (k, map) in maps.iter_mut().enumerate() {
            map.insert(key.clone(), b[k].to_string());
        }
        tuples.push(t);
    }
    let src = RandomVectorDistribution::new(tuples, vec![0.125; 8]).expect("valid by construction");
    let aux = AuxSpec {
        aux: maps
            .into_iter()
            .enumerate()
            .map(|(k, map)| AuxVar { id: format!("K{k}"), map })
            .collect(),
    };
    (src, aux)
}

/// Five nodes; node 1 holds `Y1, Y2, Y3`, demanded at nodes 3, 4 and 5.
/// Unit-capacity edges `e1: 1→2`, `e2: 1→3`, `e3: 1→4`, `e4: 1→5`;
/// unconstrained edges `e5: 2→3`, `e6: 2→4`, `e7: 2→5`.
pub fn example_network() -> (NetworkSpec, RandomVectorDistribution, AuxSpec) {
    let edge = |id: &str, tail: &str, head: &str, capacity| Edge {
        id: id.into(),
        tail: tail.into(),
        head: head.into(),
        capacity,
    };
    let one = Capacity::Finite(1.0);
    let inf = Capacity::Unconstrained;
    let net = NetworkSpec {
        nodes: (1..=5).map(|i| i.to_string()).collect(),
        edges: vec![
            edge("e1", "1", "2", one),
            edge("e2", "1", "3", one),
            edge("e3", "1", "4", one),
            edge("e4", "1", "5", one),
            edge("e5", "2", "3", inf),
            edge("e6", "2", "4", inf),
            edge("e7", "2", "5", inf),
        ],
        sources: (1..=3)
            .map(|i| Source {
                id: format!("Y{i}"),
                placed: vec!["1".into()],
                demanded: vec![(i + 2).to_string()],
            })
            .collect(),
    };
    let (src, aux) = example_sources();
    (net, src, aux)
}
