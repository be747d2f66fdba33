use super::*;
use crate::bounds::log2_bound;
use crate::generate::{enumerate_instances, gen_setting2, random_setting1, PathControl};
use crate::instance::{Instance, Setting};
use crate::oracle::{replay, ComponentAdversary, ExactAdversary, QueryKind, TruthfulOracle};
use crate::separators::ExactProvider;

fn truthful(inst: &Instance, kind: QueryKind) -> TruthfulOracle {
    TruthfulOracle::new(inst.clone(), kind)
}

#[test]
fn single_vertex_needs_no_query() {
    let g = Graph::path(1);
    let inst = Instance::from_path(1, &[0]).unwrap();
    let r = tree_search(&g, &mut truthful(&inst, QueryKind::B)).unwrap();
    assert_eq!((r.endpoint, r.queries_used), (0, 0));
}

#[test]
fn tree_search_on_paths_and_trees() {
    for n in 2..=20 {
        let g = Graph::path(n);
        for inst in enumerate_instances_big(&g) {
            let r = tree_search(&g, &mut truthful(&inst, QueryKind::B)).unwrap();
            assert_eq!(r.endpoint, inst.endpoint());
            assert!(r.queries_used as u64 <= log2_bound(n), "n={n}");
        }
    }
    let g = Graph::binary_tree(15);
    for kind in [QueryKind::A, QueryKind::B] {
        for inst in enumerate_instances_big(&g) {
            let r = tree_search(&g, &mut truthful(&inst, kind)).unwrap();
            assert_eq!(r.endpoint, inst.endpoint());
            assert!(r.queries_used <= 4);
        }
    }
    assert_eq!(tree_search(&Graph::cycle(4), &mut truthful(&Instance::from_path(4, &[0]).unwrap(), QueryKind::B)).unwrap_err(), Error::NotATree);
}

fn enumerate_instances_big(g: &Graph) -> Vec<Instance> {
    crate::generate::enumerate_instances_capped(g, 0, Setting::S2, 20).unwrap()
}

#[test]
fn single_edge_takes_one_query() {
    let g = Graph::path(2);
    for inst in enumerate_instances(&g, 0, Setting::S2).unwrap() {
        let r = tree_search(&g, &mut truthful(&inst, QueryKind::B)).unwrap();
        assert_eq!(r.queries_used, 1);
        assert_eq!(r.endpoint, inst.endpoint());
    }
}

#[test]
fn every_searcher_is_correct_on_small_graphs() {
    let spec = GridSpec::new(vec![3, 3]).unwrap();
    let grid = spec.build();
    let other = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 6), (6, 7), (7, 4), (2, 6)]).unwrap();
    for setting in [Setting::S1, Setting::S2] {
        for kind in [QueryKind::A, QueryKind::B] {
            for inst in enumerate_instances(&grid, 0, setting).unwrap() {
                let r = grid_bisection_search(&spec, &grid, &mut truthful(&inst, kind)).unwrap();
                assert_eq!(r.endpoint, inst.endpoint());
                replay(&inst, &r.transcript).unwrap();
                let r = follow_path(&grid, &mut truthful(&inst, kind)).unwrap();
                assert_eq!(r.endpoint, inst.endpoint());
                assert_eq!(r.queries_used, inst.path_len() + 1);
            }
            for inst in enumerate_instances(&other, 0, setting).unwrap() {
                let mut p = ExactProvider::new(Rational64::new(1, 2));
                let r = separator_search(&other, &mut truthful(&inst, kind), &mut p).unwrap();
                assert_eq!(r.endpoint, inst.endpoint());
            }
        }
    }
}

#[test]
fn bisection_on_seeded_grids() {
    for dims in [vec![4, 4], vec![8, 8], vec![16, 16], vec![4, 4, 4], vec![5, 7]] {
        let spec = GridSpec::new(dims).unwrap();
        let g = spec.build();
        for seed in 0..20 {
            let insts = [
                gen_setting2(&g, 0, PathControl::Seed(seed)).unwrap(),
                random_setting1(&g, 0, seed).unwrap(),
            ];
            for inst in insts {
                for kind in [QueryKind::A, QueryKind::B] {
                    let r = grid_bisection_search(&spec, &g, &mut truthful(&inst, kind)).unwrap();
                    assert_eq!(r.endpoint, inst.endpoint());
                    for round in &r.trace[1..] {
                        assert!(2 * round.located_size <= round.region_size);
                    }
                }
            }
        }
    }
}

#[test]
fn adversaries_end_with_a_witness() {
    let spec = GridSpec::cube(2, 4).unwrap();
    let g = spec.build();
    let mut exact = ExactAdversary::new(&g, 0).unwrap();
    let r = grid_bisection_search(&spec, &g, &mut exact).unwrap();
    replay(&exact.witness(r.endpoint).unwrap(), &r.transcript).unwrap();
    let mut comp = ComponentAdversary::new(&g, 0).unwrap();
    let r = grid_bisection_search(&spec, &g, &mut comp).unwrap();
    replay(&comp.witness(r.endpoint).unwrap(), &r.transcript).unwrap();
}

#[test]
fn follow_path_zero_length() {
    let g = Graph::path(3);
    let inst = Instance::from_path(3, &[0]).unwrap();
    for kind in [QueryKind::A, QueryKind::B] {
        let r = follow_path(&g, &mut truthful(&inst, kind)).unwrap();
        assert_eq!((r.endpoint, r.queries_used), (0, 1));
    }
}

#[test]
fn trace_serializes() {
    let spec = GridSpec::cube(2, 4).unwrap();
    let g = spec.build();
    let inst = gen_setting2(&g, 0, PathControl::Target(15)).unwrap();
    let r = grid_bisection_search(&spec, &g, &mut truthful(&inst, QueryKind::B)).unwrap();
    let mut buf = Vec::new();
    r.write_trace_jsonl(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), r.trace.len());
}
