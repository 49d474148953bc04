//! Property tests for the structural invariants: rank-nullity, coset shift
//! invariance, solve/in_span consistency, downward closure of clique
//! complexes, co-complex involution and homology/cohomology duality.

use proptest::prelude::*;
use qldpc::chain::ChainComplex;
use qldpc::decoders::tjoin_decode;
use qldpc::gf2::{self, BinaryMatrix, BitVector, CosetMin};
use qldpc::graph::Graph;
use qldpc::simplicial::clique_complex;

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(proptest::bool::weighted(0.3), rows * cols).prop_map(
            move |bits| {
                let entries = bits
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &b)| b.then_some((i / cols, i % cols)));
                BinaryMatrix::from_entries(rows, cols, entries).unwrap()
            },
        )
    })
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let count = pairs.len();
        proptest::collection::vec(proptest::bool::weighted(0.5), count).prop_map(move |keep| {
            let edges = pairs
                .iter()
                .zip(&keep)
                .filter_map(|(&e, &k)| k.then_some(e))
                .collect();
            Graph::new(n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in arb_matrix(9, 14)) {
        let r = gf2::rank(&m);
        let kernel = gf2::kernel_basis(&m);
        prop_assert_eq!(r + kernel.len(), m.n_cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        prop_assert_eq!(r, gf2::rank(&m.transpose()));
    }

    #[test]
    fn solve_constructed_systems(m in arb_matrix(8, 12), bits in proptest::collection::vec(any::<bool>(), 12)) {
        let support: Vec<usize> = (0..m.n_cols()).filter(|&i| bits[i]).collect();
        let x0 = BitVector::from_support(m.n_cols(), &support);
        let b = m.mul_vec(&x0);
        let x = gf2::solve(&m, &b).expect("constructed system is consistent");
        prop_assert_eq!(&m.mul_vec(&x), &b);
        // solve succeeds iff b is in the column space.
        prop_assert!(gf2::in_span(&m.transpose(), &b));
    }

    #[test]
    fn coset_min_shift_invariant(span in arb_matrix(8, 14), bits in proptest::collection::vec(any::<bool>(), 14), row in 0usize..8) {
        let shift = BitVector::from_support(
            span.n_cols(),
            &(0..span.n_cols()).filter(|&i| bits[i]).collect::<Vec<_>>(),
        );
        let row = row % span.n_rows();
        let shifted = shift.xor(&span.row_as_bitvector(row));
        let weight = |s: &BitVector| match gf2::min_weight_coset(&span, s, 14, 1 << 20).unwrap() {
            CosetMin::Found { weight, .. } => weight,
            CosetMin::ExceedsCap { .. } => unreachable!(),
        };
        prop_assert_eq!(weight(&shift), weight(&shifted));
    }

    #[test]
    fn clique_complex_is_downward_closed(g in arb_graph(8)) {
        let x = clique_complex(&g, 2);
        prop_assert!(x.chain().validate().is_ok());
        // Boundary of a p-face has weight exactly p+1.
        for p in 1..=x.dimension() {
            let b = x.chain().boundary(p);
            let cols = b.transpose();
            for f in 0..x.face_count(p) {
                prop_assert_eq!(cols.row(f).len(), p + 1);
            }
        }
        // Triangles are exactly the 3-cliques.
        for t in x.faces(2) {
            let (a, b, c) = (t[0] as usize, t[1] as usize, t[2] as usize);
            prop_assert!(g.neighbours(a).any(|w| w == b));
            prop_assert!(g.neighbours(a).any(|w| w == c));
            prop_assert!(g.neighbours(b).any(|w| w == c));
        }
    }

    #[test]
    fn cocomplex_involution_and_duality(g in arb_graph(7)) {
        let x: ChainComplex = clique_complex(&g, 2).into_chain();
        prop_assert_eq!(&x.cocomplex().cocomplex(), &x);
        for p in 0..=x.dimension() {
            prop_assert_eq!(x.homology_dim(p), x.cohomology_dim(p));
        }
    }

    #[test]
    fn tjoin_boundary_matches(g in arb_graph(8), mask in any::<u32>()) {
        prop_assume!(g.n_edges() > 0);
        let mut deg = vec![0usize; g.n_vertices()];
        for e in 0..g.n_edges() {
            if mask >> (e % 32) & 1 == 1 {
                let (u, v) = g.edges()[e];
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        let odd: Vec<usize> = (0..g.n_vertices()).filter(|&v| deg[v] % 2 == 1).collect();
        let join = tjoin_decode(&g, &odd).unwrap();
        let mut jdeg = vec![0usize; g.n_vertices()];
        for e in join.iter_support() {
            let (u, v) = g.edges()[e];
            jdeg[u] += 1;
            jdeg[v] += 1;
        }
        let jodd: Vec<usize> = (0..g.n_vertices()).filter(|&v| jdeg[v] % 2 == 1).collect();
        prop_assert_eq!(jodd, odd);
    }
}
