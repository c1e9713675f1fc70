use approx::assert_abs_diff_eq;
use proptest::collection::vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_gap::bounds::{
    amgm_combination, bounds_report_from, joined_pair_upper, path_step_function, test_function_upper,
};
use spectral_gap::constructions::{joined_pair_block_size, joined_pair_path, joined_regular_pair};
use spectral_gap::linalg::{negative_count, symmetric_eigenvalues, Matrix};
use spectral_gap::spectral::{self, rayleigh_quotient, spectral_gap};
use spectral_gap::Graph;

/// Number of components by union-find, independent of the graph's own BFS.
fn components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// Random connected graph: a random tree plus random extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        (vec(any::<prop::sample::Index>(), n - 1), vec(any::<bool>(), n * (n - 1) / 2), 0.0f64..0.5).prop_map(
            move |(parents, extra, density)| {
                let mut edges: Vec<(usize, usize)> =
                    parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if extra[k] && (k as f64 / extra.len() as f64) < density {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            },
        )
    })
}

fn tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        vec(any::<prop::sample::Index>(), n - 1).prop_map(move |parents| {
            let edges: Vec<(usize, usize)> =
                parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graph6_round_trip(g in any_graph(62)) {
        let text = g.to_graph6().unwrap();
        let back = Graph::from_graph6(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_graph6().unwrap(), text);
    }

    #[test]
    fn edge_list_round_trip(g in any_graph(30)) {
        prop_assert_eq!(spectral_gap::graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn handshake(g in any_graph(40)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        prop_assert_eq!(g.volume(), 2 * g.edge_count());
    }

    #[test]
    fn every_tree_edge_is_a_bridge(t in tree(40)) {
        prop_assert_eq!(t.bridges().len(), t.vertex_count() - 1);
    }

    #[test]
    fn bridges_match_deletion_oracle(g in any_graph(16)) {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let base = components(g.vertex_count(), &edges);
        let expected: Vec<(usize, usize)> = edges
            .iter()
            .filter(|e| {
                let rest: Vec<(usize, usize)> = edges.iter().copied().filter(|f| f != *e).collect();
                components(g.vertex_count(), &rest) > base
            })
            .copied()
            .collect();
        prop_assert_eq!(g.bridges(), expected);
        prop_assert_eq!(g.component_count(), base);
    }

    #[test]
    fn spectrum_invariants(g in connected_graph(30)) {
        let s = spectral_gap(&g).unwrap();
        let n = g.vertex_count();
        // trace of the normalized Laplacian is n
        assert_abs_diff_eq!(s.eigenvalues.iter().sum::<f64>(), n as f64, epsilon = 1e-9);
        assert_abs_diff_eq!(s.eigenvalues[0], 0.0, epsilon = 1e-10);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.eigenvalues.iter().all(|&x| (-1e-10..=2.0 + 1e-10).contains(&x)));
        // √d spans the kernel
        let root: Vec<f64> = g.degrees().iter().map(|&d| (d as f64).sqrt()).collect();
        let image = spectral::apply_laplacian(&g, &root);
        prop_assert!(image.iter().all(|x| x.abs() < 1e-10));
        let top = s.eigenvalues[n - 1];
        prop_assert_eq!(g.is_bipartite(), (top - 2.0).abs() < 1e-9);
        // the harmonic eigenfunction is normalized and centered
        let f = &s.harmonic_f;
        let mean: f64 = f.iter().zip(g.degrees()).map(|(x, &d)| x * d as f64).sum();
        let norm: f64 = f.iter().zip(g.degrees()).map(|(x, &d)| x * x * d as f64).sum();
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rayleigh_quotient(&g, f).unwrap(), s.lambda1, epsilon = 1e-10);
        prop_assert!(s.residual <= 1e-8);
    }

    #[test]
    fn centered_functions_bound_lambda1_from_above(g in connected_graph(25), seed in any::<u64>()) {
        let s = spectral_gap(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<f64> = (0..g.vertex_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let vol = g.volume() as f64;
        let mean = f.iter().zip(g.degrees()).map(|(x, &d)| x * d as f64).sum::<f64>() / vol;
        let centered: Vec<f64> = f.iter().map(|x| x - mean).collect();
        prop_assert!(rayleigh_quotient(&g, &centered).unwrap() >= s.lambda1 - 1e-12);
        prop_assert!(test_function_upper(&g, &f).unwrap() >= s.lambda1 - 1e-12);
    }

    #[test]
    fn lower_bounds_hold(g in connected_graph(30)) {
        let s = spectral_gap(&g).unwrap();
        let r = bounds_report_from(&g, &s).unwrap();
        prop_assert!(r.min_lower_slack() >= -1e-10, "{:?}", r.lower_slacks());
        prop_assert!(r.harmonic >= r.diameter_harmonic - 1e-12);
        prop_assert!(r.diameter_harmonic >= r.improved - 1e-12);
    }
}

#[test]
fn amgm_combination_dominates() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let a: f64 = rng.gen_range(1.0..1e6);
        let b: f64 = rng.gen_range(1.0..1e6);
        let combined = amgm_combination(a, b).unwrap();
        assert!(combined >= 2.0 / (a * b).sqrt() * (1.0 - 1e-12), "a={a} b={b}");
        // equals 1/a + 1/b, the two-valued objective
        assert!((combined - (1.0 / a + 1.0 / b)).abs() <= 1e-12 * combined);
    }
}

#[test]
fn joined_pairs_respect_their_upper_bound() {
    let mut checked = 0;
    for n in (9..=200).step_by(7) {
        for diameter in [1, 2, 3, n / 4, n / 2] {
            for degree in [1, 2, 3, 4, 6] {
                if joined_pair_block_size(n, diameter, degree).is_err() {
                    continue;
                }
                let g = joined_regular_pair(n, diameter, degree).unwrap();
                let lambda1 = spectral::lambda1(&g).unwrap();
                let formula = joined_pair_upper(n, diameter, degree).unwrap();
                assert!(lambda1 <= formula + 1e-12, "n={n} D={diameter} d={degree}: {lambda1} > {formula}");
                let step = path_step_function(n, &joined_pair_path(n, diameter)).unwrap();
                let quotient = test_function_upper(&g, &step).unwrap();
                assert!(lambda1 <= quotient + 1e-12 && quotient <= formula + 1e-12);
                checked += 1;
            }
        }
    }
    assert!(checked > 30, "only {checked} parameter sets");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn inertia_count_matches_eigenvalues(
        n in 1usize..9,
        entries in vec(prop_oneof![Just(0.0), Just(0.5), -1.0f64..1.0], 45),
        x in -2.0f64..2.0,
    ) {
        let mut m = Matrix::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                m[(i, j)] = entries[k];
                m[(j, i)] = entries[k];
                k += 1;
            }
        }
        let values = symmetric_eigenvalues(&m).unwrap();
        prop_assume!(values.iter().all(|v| (v - x).abs() > 1e-9));
        prop_assert_eq!(negative_count(&m, x), values.iter().filter(|&&v| v < x).count());
    }
}
