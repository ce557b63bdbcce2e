mod common;

use monopath_core::construct::{
    cover_from, rado_cover, uftrick_partition, zigzag_certificate, zigzag_htype, CoverParams, RadoParams,
    UftrickParams,
};
use monopath_core::graph::{ColouredGraph, LazyColouredGraph};
use monopath_core::oracle::ResidueChain;
use monopath_core::solver::min_partition;
use monopath_core::verify::{verify_certificate, verify_partition, PathPartition, PrefixCertificate, Status};
use monopath_core::{ColouringSpec, HTypeGraph, LargeSetOracle, Mode, SetDescriptor};
use proptest::prelude::*;

const PERIODIC: [&str; 6] = ["constant:0", "parity", "mod:3", "star", "mod:4,2", "layer:table=0/1/1/0"];

fn lazy(spec: &str) -> LazyColouredGraph {
    spec.parse::<ColouringSpec>().unwrap().build_lazy().unwrap()
}

fn rado(spec: &str, steps: usize, chain: &[u64]) -> PrefixCertificate {
    let g = lazy(spec);
    let mut oracle = LargeSetOracle::make_congruence_oracle(chain.to_vec()).unwrap();
    rado_cover(&g, &mut oracle, &RadoParams::new(steps)).unwrap().certificate
}

#[derive(Debug, Clone, Copy)]
enum Mutation {
    Swap,
    Relabel,
    Delete,
}

/// Apply a mutation that must make `paths` invalid; `None` when the
/// mutation has no target (e.g. relabelling with only degenerate paths).
fn mutate(
    part: &mut PathPartition,
    colours: usize,
    below: Option<usize>,
    m: Mutation,
    pick: usize,
) -> Option<()> {
    let paths = &mut part.paths;
    let k = pick % paths.len();
    match m {
        Mutation::Swap => {
            let donor = (0..paths.len()).map(|d| (k + 1 + d) % paths.len()).find(|&d| {
                if d == k {
                    paths[k].len() >= 2
                } else {
                    !paths[d].is_empty()
                }
            })?;
            let (victim, source) = if donor == k {
                (paths[k].vertices[0], paths[k].vertices[1])
            } else {
                (paths[k].vertices[pick % paths[k].len()], paths[donor].vertices[0])
            };
            let pos = paths[k].vertices.iter().position(|&v| v == victim).unwrap();
            paths[k].vertices[pos] = source;
        }
        Mutation::Relabel => {
            let mode = part.mode;
            let k = (0..paths.len()).map(|d| (k + d) % paths.len()).find(|&d| {
                paths[d].len() >= 2 || (mode == Mode::Distinct && paths.len() >= 2)
            })?;
            if paths[k].len() >= 2 {
                paths[k].colour = match paths[k].colour {
                    Some(c) if colours > 1 => Some((c + 1 + pick % (colours - 1)) % colours),
                    _ => None,
                };
            } else {
                let other = (k + 1) % paths.len();
                paths[k].colour = paths[other].colour;
            }
        }
        Mutation::Delete => {
            let candidates: Vec<(usize, usize)> = paths
                .iter()
                .enumerate()
                .flat_map(|(i, p)| p.vertices.iter().enumerate().map(move |(j, &v)| (i, j, v)))
                .filter(|&(_, _, v)| below.is_none_or(|b| v < b))
                .map(|(i, j, _)| (i, j))
                .collect();
            let &(i, j) = candidates.get(pick % candidates.len().max(1))?;
            let v = paths[i].vertices.remove(j);
            if below.is_some() {
                part.cover.retain(|&w| w != v);
            }
        }
    }
    Some(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mutated_partitions_are_rejected(seed in 0u64..10_000, n in 2usize..8, r in 1usize..4, m in 0usize..3, pick in 0usize..64) {
        let g = common::random_graph(n, r, seed);
        let mode = if seed % 2 == 0 { Mode::Any } else { Mode::Distinct };
        let Ok(res) = min_partition(&g, mode) else { return Ok(()) };
        let mut part = res.witness;
        let m = [Mutation::Swap, Mutation::Relabel, Mutation::Delete][m];
        if mutate(&mut part, r, None, m, pick).is_some() {
            prop_assert!(!verify_partition(&g, &part).is_ok(), "{:?} {:?}", m, part);
        }
    }

    #[test]
    fn mutated_certificates_are_rejected(c in 0usize..PERIODIC.len(), m in 0usize..3, pick in 0usize..1000) {
        let spec = PERIODIC[c];
        let g = lazy(spec);
        let mut cert = rado(spec, 60, &[0]);
        let m = [Mutation::Swap, Mutation::Relabel, Mutation::Delete][m];
        let below = Some(cert.coverage_bound);
        if mutate(&mut cert.partition, g.colours(), below, m, pick).is_some() {
            prop_assert_eq!(verify_certificate(&g, &cert).status(), Status::Violation, "{:?}", m);
        }
    }

    #[test]
    fn lazy_colourings_are_pure(u in 0usize..5000, v in 0usize..5000, seed in any::<u64>()) {
        let specs = [format!("random:seed={seed},r=3"), "mod:7,3".into(), "star:3,0".into(), "layer:table=2/0/1".into()];
        for spec in &specs {
            let g = lazy(spec);
            let again = lazy(spec);
            prop_assert_eq!(g.edge_colour(u, v), g.edge_colour(v, u));
            prop_assert_eq!(g.edge_colour(u, v), again.edge_colour(u, v));
        }
    }

    #[test]
    fn rado_coverage_doubles(c in 0usize..PERIODIC.len(), s in 10usize..150) {
        let spec = PERIODIC[c];
        prop_assert!(rado(spec, 2 * s, &[0]).coverage_bound > rado(spec, s, &[0]).coverage_bound);
    }

    #[test]
    fn zigzag_respects_index_order(identified in any::<bool>(), len in 1usize..400) {
        let host = lazy("constant:0");
        let h = if identified { HTypeGraph::from_complete(&host).unwrap() } else { HTypeGraph::disjoint_from(&host).unwrap() };
        let mut s = zigzag_htype(&h);
        s.fill(len);
        let p = s.produced();
        for (k, w) in p.windows(2).enumerate() {
            // even positions hold a-vertices, odd positions b-vertices
            let (a, b) = if k % 2 == 0 { (w[0], w[1]) } else { (w[1], w[0]) };
            let (xi, zeta) = (h.a_index(a).unwrap(), h.b_index(b).unwrap());
            prop_assert!(xi <= zeta && a != b);
        }
        let covered = p.len() / 2;
        prop_assert!((0..covered).all(|xi| p.contains(&h.a(xi))));
    }
}

#[test]
fn certificates_verify_under_other_chains() {
    for spec in PERIODIC {
        for chain in [vec![0], vec![0, 1], vec![0, 1, 5]] {
            let cert = rado(spec, 300, &chain);
            let report = verify_certificate(&lazy(spec), &cert);
            assert_eq!(report.status(), Status::Ok, "{spec} {chain:?}: {report}");
            assert!(cert.partition.len() <= lazy(spec).colours());
        }
    }
}

#[test]
fn certificates_are_reproducible() {
    for spec in PERIODIC {
        let a = serde_json::to_string(&rado(spec, 400, &[0])).unwrap();
        let b = serde_json::to_string(&rado(spec, 400, &[0])).unwrap();
        assert_eq!(a, b);
    }
    let h = HTypeGraph::disjoint_from(&lazy("parity")).unwrap();
    assert_eq!(zigzag_certificate(&h, 500, None), zigzag_certificate(&h, 500, None));
}

#[test]
fn oracle_stays_coherent_after_runs() {
    for spec in PERIODIC {
        let g = lazy(spec);
        let mut oracle = LargeSetOracle::congruence(ResidueChain::new(vec![0, 1]).unwrap());
        uftrick_partition(&g, &SetDescriptor::all(), &mut oracle, &UftrickParams { depth: 40, ..Default::default() })
            .unwrap();
        rado_cover(&g, &mut oracle, &RadoParams::new(200)).unwrap();
        assert!(oracle.audit(&g, 24).unwrap().is_empty(), "{spec}");
    }
}

#[test]
fn cover_certificates_verify() {
    for (spec, target) in [("constant:0", "all"), ("parity", "mod(0,2)"), ("mod:3", "mod(0,3)"), ("parity", "all")] {
        let g = lazy(spec);
        let target: SetDescriptor = target.parse().unwrap();
        let colour = usize::from(spec == "parity" && target == SetDescriptor::all());
        match cover_from(&g, &target, &CoverParams::new(colour, 200)) {
            Ok(cert) => {
                let report = verify_certificate(&g, &cert);
                assert_eq!(report.status(), Status::Ok, "{spec}: {report}");
                assert!(cert.coverage_bound >= 100);
            }
            Err(e) => panic!("{spec} {target}: {e}"),
        }
    }
    // colour 0 separates the parity classes
    assert!(cover_from(&lazy("parity"), &SetDescriptor::all(), &CoverParams::new(0, 50)).is_err());
}

#[test]
fn truncated_horizon_is_unverifiable_not_accepted() {
    let g = lazy("parity");
    let mut oracle = LargeSetOracle::make_congruence_oracle(vec![0]).unwrap();
    let params = RadoParams { horizon: Some(30), ..RadoParams::new(100) };
    let cert = rado_cover(&g, &mut oracle, &params).unwrap().certificate;
    assert!(!cert.unverified.is_empty());
    assert_eq!(verify_certificate(&g, &cert).status(), Status::Unverifiable);
}
