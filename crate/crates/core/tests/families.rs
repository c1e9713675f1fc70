use spectral_gap::bounds::construction_bounds;
use spectral_gap::canonical::are_isomorphic;
use spectral_gap::constructions::*;
use spectral_gap::search::{alpha, sweep_double_kite, SearchOptions};
use spectral_gap::spectral;
use spectral_gap::Graph;

fn deletion_bridges(g: &Graph) -> Vec<(usize, usize)> {
    let base = g.component_count();
    g.edges().filter(|&(u, v)| g.without_edge(u, v).component_count() > base).collect()
}

#[test]
fn double_kite_8_6_structure() {
    let g = double_kite(8, 6).unwrap();
    let m = g.metrics();
    assert_eq!((g.vertex_count(), g.edge_count()), (22, 63));
    assert_eq!((m.volume, m.max_degree, m.diameter), (126, 8, Some(9)));
    let path_edges: Vec<(usize, usize)> = (7..14).map(|p| (p, p + 1)).collect();
    assert_eq!(g.bridges(), path_edges);
    assert_eq!(deletion_bridges(&g), path_edges);
    let left: Vec<usize> = (0..10).collect();
    assert_eq!(g.cut_edges_between(&left), 1);
}

#[test]
fn joined_pair_of_cliques_is_a_double_kite() {
    // the circulant 7-regular graph on 8 vertices is K₈
    assert_eq!(joined_regular_pair(22, 7, 7).unwrap(), double_kite(8, 6).unwrap());
    // canonical forms confirm the smaller analogue up to relabeling
    let g = joined_regular_pair(8, 3, 2).unwrap().permuted(&[7, 0, 6, 1, 5, 2, 4, 3]).unwrap();
    assert!(are_isomorphic(&g, &double_kite(3, 2).unwrap()).unwrap());
}

#[test]
fn small_path_like_double_kites() {
    assert!(are_isomorphic(&double_kite(2, 0).unwrap(), &path(4).unwrap()).unwrap());
    assert!(are_isomorphic(&double_kite(1, 1).unwrap(), &path(3).unwrap()).unwrap());
    assert!(joined_regular_pair(11, 3, 1).is_err());
}

#[test]
fn alpha_is_below_every_construction() {
    for n in 2..=7 {
        let record = alpha(n, SearchOptions::default()).unwrap();
        assert!(record.alpha > 0.0);
        let mut candidates = vec![path(n).unwrap(), complete(n).unwrap()];
        if n >= 3 {
            candidates.push(cycle(n).unwrap());
        }
        for r in 1..=n / 2 {
            candidates.push(double_kite(r, n - 2 * r).unwrap());
        }
        for seed in 0..5 {
            candidates.push(random_connected(n, 0.5, seed).unwrap());
        }
        for g in &candidates {
            assert!(record.alpha <= spectral::lambda1(g).unwrap() + 1e-12, "n={n}");
        }
        for m in &record.minimizers {
            let g = Graph::from_graph6(&m.graph6).unwrap();
            assert!((spectral::lambda1(&g).unwrap() - record.alpha).abs() <= 1e-9);
            assert!(m.np_cut_edges >= 1);
        }
    }
}

#[test]
fn joined_pair_bound_on_double_kites() {
    for (r, s) in [(3, 0), (4, 4), (8, 6), (20, 19)] {
        let (_, _, report) = construction_bounds(&ConstructionSpec::DoubleKite { r, s }).unwrap();
        let upper = report.joined_pair_upper.unwrap();
        assert!(report.lambda1 <= upper + 1e-12);
        assert!(report.test_function_upper.unwrap() <= upper + 1e-12);
        assert!(report.lambda1 <= report.test_function_upper.unwrap() + 1e-12);
    }
}

#[test]
fn sweep_argmin_recomputes() {
    let sweep = sweep_double_kite(12, None).unwrap();
    let best = sweep.best();
    let again = spectral::spectral_gap(&double_kite(best.r, best.s).unwrap()).unwrap().lambda1;
    assert!((again - best.lambda1).abs() <= 1e-9);
    assert!(sweep.rows.iter().all(|row| 2 * row.r + row.s == 12));
}

/// Full dense sweep at n = 999: about 500 eigensolves.
#[test]
fn sweep_at_999_prefers_balanced_split() {
    let sweep = sweep_double_kite(999, None).unwrap();
    let r = sweep.best().r;
    assert!((300..=366).contains(&r), "argmin r = {r}");
}
