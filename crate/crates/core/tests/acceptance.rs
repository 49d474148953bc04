//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured numbers (run with `--nocapture` to see them all).
//! Oracles here are written independently of the library internals they
//! check: naive boolean elimination, exhaustive subset scans.

use qldpc::chain::{ChainComplex, SystoleReport};
use qldpc::classical::{path_code, random_regular_ldpc, BipartiteCode};
use qldpc::decoders::{
    simulate_local, simulate_product, sweep_weight1_local, tjoin_decode, ComponentDecoder,
    ErrorType,
};
use qldpc::gf2::{self, BinaryMatrix, BitVector, CosetMin};
use qldpc::graph::Graph;
use qldpc::lsv;
use qldpc::par;
use qldpc::product::{
    build_product, build_product_sparse, product_params, tensor_cycle, weight_audit, Provenance,
};
use qldpc::simplicial::{clique_complex, fixture_torus, SimplicialComplex};
use rand::rngs::StdRng;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use std::sync::OnceLock;

fn pass(criterion: usize, name: &str, detail: String) {
    println!("criterion {criterion:2} ({name}): PASS — {detail}");
}

// --- shared fixtures -------------------------------------------------------

static LSV: OnceLock<(SimplicialComplex, lsv::LsvBuildInfo)> = OnceLock::new();

fn lsv_complex() -> &'static (SimplicialComplex, lsv::LsvBuildInfo) {
    LSV.get_or_init(|| {
        let ctx = lsv::build_structure(2, 3, 2, &[1, 1, 1]).expect("acceptance configuration");
        lsv::build_quotient_complex(&ctx, 200_000).expect("BFS terminates under the gate")
    })
}

// --- independent oracles ---------------------------------------------------

/// Naive boolean row reduction, no bit packing, no shared code paths.
fn oracle_rank(m: &BinaryMatrix) -> usize {
    let mut rows: Vec<Vec<bool>> = (0..m.n_rows())
        .map(|r| {
            let mut row = vec![false; m.n_cols()];
            for &c in m.row(r) {
                row[c as usize] = true;
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.n_cols() {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][col]) {
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Exhaustive minimum over the whole coset, by walking every combination
/// of the raw span rows.
fn oracle_coset_min(span: &BinaryMatrix, shift: &BitVector) -> usize {
    let rows = span.packed_rows();
    assert!(rows.len() <= 20);
    let mut best = usize::MAX;
    for mask in 0u64..(1 << rows.len()) {
        let mut v = shift.clone();
        for (i, row) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v.xor_assign(row);
            }
        }
        best = best.min(v.weight());
    }
    best
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, density: f64) -> BinaryMatrix {
    let mut entries = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                entries.push((r, c));
            }
        }
    }
    BinaryMatrix::from_entries(rows, cols, entries).unwrap()
}

// --- criteria --------------------------------------------------------------

#[test]
fn criterion_01_chain_validity() {
    let mut checked = 0;
    for (r, c) in [(3, 3), (3, 4), (4, 4)] {
        assert!(fixture_torus(r, c).unwrap().chain().validate().is_ok());
        checked += 1;
    }
    let k4 = {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((u, v));
            }
        }
        clique_complex(&Graph::new(4, edges), 2)
    };
    assert!(k4.chain().validate().is_ok());
    checked += 1;
    let (lsv_cx, info) = lsv_complex();
    assert!(lsv_cx.chain().validate().is_ok());
    checked += 1;
    // Products validate as part of assembly; do it explicitly anyway.
    for m in [2, 5] {
        let p = build_product(
            &fixture_torus(3, 3).unwrap().into_chain(),
            &path_code(m).unwrap(),
        )
        .unwrap();
        assert!(p.complex().validate().is_ok());
        checked += 1;
    }
    pass(
        1,
        "chain validity",
        format!(
            "{checked} complexes validate bit-exactly (LSV group size {})",
            info.group_size
        ),
    );
}

#[test]
fn criterion_02_gf2_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(0xCAFE);
    let mut instances = 0;
    for _ in 0..100 {
        let rows = rng.gen_range(1..=10);
        let cols = rng.gen_range(rows..=20);
        let m = random_matrix(&mut rng, rows, cols, 0.35);
        // rank agrees with the naive oracle, and with its transpose.
        let r = gf2::rank(&m);
        assert_eq!(r, oracle_rank(&m));
        assert_eq!(r, gf2::rank(&m.transpose()));
        // kernel: right count, annihilated, independent.
        let kernel = gf2::kernel_basis(&m);
        assert_eq!(kernel.len(), cols - r);
        for v in &kernel {
            assert!(m.mul_vec(v).is_zero());
        }
        // min_weight_coset agrees with the exhaustive oracle (span dim <= 10).
        let span = random_matrix(&mut rng, 10, cols, 0.3);
        let shift = BitVector::from_support(
            cols,
            &(0..cols).filter(|_| rng.gen_bool(0.3)).collect::<Vec<_>>(),
        );
        match gf2::min_weight_coset(&span, &shift, cols, 1 << 22).unwrap() {
            CosetMin::Found {
                weight, witness, ..
            } => {
                assert_eq!(weight, oracle_coset_min(&span, &shift));
                assert_eq!(witness.weight(), weight);
                assert!(gf2::in_span(&span, &witness.xor(&shift)));
            }
            other => panic!("unexpected {other:?}"),
        }
        instances += 1;
    }
    pass(
        2,
        "gf2 oracle equivalence",
        format!("{instances} seeded instances"),
    );
}

#[test]
fn criterion_03_kunneth_dimension() {
    let mut rng = StdRng::seed_from_u64(3003);
    let mut pairs = 0;
    while pairs < 20 {
        // Small valid 2-complex: torus with a random subset of triangles,
        // or a random clique complex forced to have at least one triangle.
        let x: ChainComplex = if pairs % 2 == 0 {
            let t = fixture_torus(3, 3).unwrap();
            let kept: Vec<Vec<u32>> = t
                .faces(2)
                .iter()
                .filter(|_| rng.gen_bool(0.6))
                .cloned()
                .collect();
            SimplicialComplex::new(9, vec![t.faces(1).to_vec(), kept])
                .unwrap()
                .into_chain()
        } else {
            let n = rng.gen_range(6..9);
            let mut edges = vec![(0, 1), (0, 2), (1, 2)];
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let cx = clique_complex(&Graph::new(n, edges), 2);
            if cx.dimension() != 2 {
                continue;
            }
            cx.into_chain()
        };
        let y: BipartiteCode = if pairs % 3 == 0 {
            path_code(rng.gen_range(2..5)).unwrap()
        } else {
            let dc = if rng.gen_bool(0.5) { 4 } else { 6 }; // must divide 12 * 3
            random_regular_ldpc(12, 3, dc, rng.gen()).unwrap()
        };
        let p = build_product(&x, &y).unwrap();
        // Left side: homology of the assembled product. Right side: the
        // component dimensions, all ranks recomputed by the naive oracle.
        let k_product = p.k();
        let h1_x = x.face_count(1) - oracle_rank(x.boundary(1)) - oracle_rank(x.boundary(2));
        let k_y = y.n_bits() - oracle_rank(y.h());
        assert_eq!(k_product, h1_x * k_y, "pair {pairs}");
        pairs += 1;
    }
    pass(
        3,
        "Künneth dimension",
        format!("{pairs} seeded pairs, K = dim H1(X) * k(Y) exactly"),
    );
}

#[test]
fn criterion_04_product_distances() {
    let x = fixture_torus(3, 3).unwrap().into_chain();
    let y = path_code(2).unwrap();
    let p = build_product(&x, &y).unwrap();
    assert_eq!(p.n_qubits(), 72);
    assert_eq!(p.k(), 2);

    // Component values, measured exhaustively.
    let s1_x = match x.systole(1, 1 << 22).unwrap() {
        SystoleReport::Value { value, .. } => value,
        other => panic!("component systole must be exact, got {other:?}"),
    };
    assert_eq!(s1_x, 3);
    let s1_co_x = match x.cosystole(1, 1 << 22).unwrap() {
        SystoleReport::Value { value, .. } => value,
        other => panic!("component cosystole must be exact, got {other:?}"),
    };
    let d_y = y.brute_force_distance(1 << 20).unwrap();
    assert_eq!(d_y, 2);
    let predicted_dx = s1_x * d_y;

    // D_X: ascending-weight enumeration rules out everything below 6; the
    // explicit tensor cycle z_X ⊗ z_Y is a non-trivial 1-cycle of weight 6.
    let dx_report = p.complex().systole(1, 1 << 25).unwrap();
    let lower = match &dx_report {
        SystoleReport::Value { value, .. } => *value,
        SystoleReport::AtLeast { bound } => *bound,
        SystoleReport::Undefined => panic!("K = 2, systole defined"),
    };
    assert!(
        lower >= predicted_dx,
        "enumeration found something below S1*d: {dx_report:?}"
    );
    let z_x = match x.systole(1, 1 << 22).unwrap() {
        SystoleReport::Value { witness, .. } => witness,
        _ => unreachable!(),
    };
    let z_y = {
        let basis = y.codeword_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].weight(), d_y);
        basis[0].clone()
    };
    let witness = tensor_cycle(&p, &z_x, &z_y);
    assert_eq!(witness.weight(), predicted_dx);
    assert!(p.sigma_x(&witness).is_zero(), "witness must be a 1-cycle");
    assert!(
        !gf2::in_span(&p.complex().boundary_span(1), &witness),
        "witness must be non-trivial"
    );
    let d_x = predicted_dx; // lower bound meets the witness weight
    assert_eq!(d_x, 6);

    // D_Z: same two-sided argument. Ascending-weight search rules out
    // everything below S^1(X); a single A''-column hosting the component
    // cocycle witness is a non-trivial 1-cocycle of that exact weight.
    let dz_lower = match p.complex().cosystole(1, 1 << 25).unwrap() {
        SystoleReport::Value { value, .. } => value,
        SystoleReport::AtLeast { bound } => bound,
        SystoleReport::Undefined => panic!("K = 2, cosystole defined"),
    };
    assert_eq!(
        dz_lower, s1_co_x,
        "search must exhaust weights below S^1(X)"
    );
    let z_co_x = match x.cosystole(1, 1 << 22).unwrap() {
        SystoleReport::Value { witness, .. } => witness,
        _ => unreachable!(),
    };
    let (_, a_second) = qldpc::classical::select_a_prime(&y);
    let a2 = a_second[0];
    let layout = p.layout();
    let mut co_witness = BitVector::zeros(p.n_qubits());
    for x1 in z_co_x.iter_support() {
        co_witness.set(layout.ea(x1, a2), true);
    }
    assert_eq!(co_witness.weight(), s1_co_x);
    assert!(
        p.sigma_z(&co_witness).is_zero(),
        "witness must be a 1-cocycle"
    );
    assert!(
        !gf2::in_span(p.complex().boundary(1), &co_witness),
        "witness must not be a coboundary"
    );
    let dz = s1_co_x;

    // The params report agrees and never silently swaps in predictions.
    let report = product_params(&p, 1 << 22);
    assert_eq!(report.n, 72);
    assert_eq!(report.k, 2);
    assert_eq!(report.predicted_d_x, Some(6));
    assert_eq!(report.predicted_d_z, Some(s1_co_x));
    match report.d_z.provenance {
        Provenance::Measured => assert_eq!(report.d_z.value, Some(dz)),
        _ => {}
    }
    pass(
        4,
        "product distances",
        format!("D_X = {d_x} = S1(X)*d(Y), D_Z = {dz} = S^1(X)"),
    );
}

#[test]
fn criterion_05_lsv_build() {
    let (complex, info) = lsv_complex();
    assert!(info.group_size > 0 && info.group_size % 20160 == 0);
    let stats = complex.degree_stats();
    assert_eq!(stats[0], (14, 14), "vertex degree Q = 2q^2+2q+2 = 14");
    assert_eq!(stats[1], (3, 3), "edge-to-triangle degree q+1 = 3");
    // Every link is the incidence graph of PG(2,2): bipartite, 3-regular,
    // 14 vertices, girth 6 (those properties pin the Heawood graph).
    let ok = par::map_indexed(complex.vertex_count(), |v| {
        let link = complex.link(v).unwrap();
        link.vertices.len() == 14
            && link.graph.regular_degree() == Some(3)
            && link.graph.bipartition().is_some()
            && link.graph.girth() == Some(6)
            && link.graph.is_connected()
    });
    assert!(ok.iter().all(|&b| b));
    pass(
        5,
        "LSV build",
        format!(
            "group {} = {} x 20160, all {} links are PG(2,2) incidence graphs",
            info.group_size,
            info.group_size / 20160,
            complex.vertex_count()
        ),
    );
}

#[test]
fn criterion_06_tjoin_optimality() {
    let mut rng = StdRng::seed_from_u64(6006);
    let mut graphs = 0;
    while graphs < 100 {
        let n = rng.gen_range(4..9);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        edges.truncate(12);
        let g = Graph::new(n, edges);
        if g.n_edges() == 0 {
            continue;
        }
        // Even odd-set = boundary of a random edge subset.
        let mask: u32 = rng.gen_range(0..(1u32 << g.n_edges()));
        let mut deg = vec![0usize; n];
        for e in 0..g.n_edges() {
            if mask >> e & 1 == 1 {
                let (u, v) = g.edges()[e];
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        let odd: Vec<usize> = (0..n).filter(|&v| deg[v] % 2 == 1).collect();
        let join = tjoin_decode(&g, &odd).unwrap();
        // Boundary matches.
        let mut jdeg = vec![0usize; n];
        for e in join.iter_support() {
            let (u, v) = g.edges()[e];
            jdeg[u] += 1;
            jdeg[v] += 1;
        }
        let jodd: Vec<usize> = (0..n).filter(|&v| jdeg[v] % 2 == 1).collect();
        assert_eq!(jodd, odd);
        // Exhaustive minimum.
        let mut best = usize::MAX;
        for m in 0u32..(1 << g.n_edges()) {
            let mut ddeg = vec![0usize; n];
            for e in 0..g.n_edges() {
                if m >> e & 1 == 1 {
                    let (u, v) = g.edges()[e];
                    ddeg[u] += 1;
                    ddeg[v] += 1;
                }
            }
            let modd: Vec<usize> = (0..n).filter(|&v| ddeg[v] % 2 == 1).collect();
            if modd == odd {
                best = best.min(m.count_ones() as usize);
            }
        }
        assert_eq!(join.weight(), best, "graph {graphs}");
        graphs += 1;
    }
    pass(
        6,
        "T-join optimality",
        format!("{graphs} seeded graphs, exhaustive minimum matched"),
    );
}

#[test]
fn criterion_07_x_decoder_end_to_end() {
    // T(3,3) x path(5): majority decoding gives alpha = 1/2, S1 = 3, so
    // every error of weight <= 2 < alpha |A| S1 / 2 = 3.75 must decode to
    // an equivalent error.
    let x = fixture_torus(3, 3).unwrap().into_chain();
    let p = build_product(&x, &path_code(5).unwrap()).unwrap();
    let mut total = 0;
    for (weight, trials, seed) in [(1, 250, 701), (2, 250, 702)] {
        let report = simulate_product(
            &p,
            ErrorType::X,
            weight,
            trials,
            seed,
            ComponentDecoder::LocalCoboundary,
        )
        .unwrap();
        assert_eq!(report.trials, trials);
        assert_eq!(
            report.successes, trials,
            "weight {weight}: {report:?} (success = syndrome-consistent AND residual in im sigma_Z*)"
        );
        assert_eq!(report.equivalence_failures, 0);
        assert_eq!(report.stalls, 0);
        total += trials;
    }
    pass(
        7,
        "X-decoder end-to-end",
        format!("{total}/500 seeded errors of weight <= 2 decoded to equivalent errors"),
    );
}

#[test]
fn criterion_08_z_decoder_end_to_end() {
    let (lsv_cx, _) = lsv_complex();
    let x = lsv_cx.chain().clone();
    let p = build_product_sparse(&x, &path_code(3).unwrap()).unwrap();
    let mut successes = 0;
    let mut stalls = 0;
    for (weight, trials, seed) in [(1, 100, 801), (2, 100, 802)] {
        let report = simulate_product(
            &p,
            ErrorType::Z,
            weight,
            trials,
            seed,
            ComponentDecoder::LocalCoboundary,
        )
        .unwrap();
        assert_eq!(report.trials, trials);
        // Zero silent failures: every outcome is a verified-equivalent
        // success or an explicitly reported stall. Syndrome consistency on
        // successes is asserted inside the decoder (bit-exact).
        assert_eq!(
            report.equivalence_failures, 0,
            "weight {weight}: {report:?}"
        );
        assert_eq!(report.successes + report.stalls, trials);
        successes += report.successes;
        stalls += report.stalls;
    }
    pass(
        8,
        "Z-decoder end-to-end",
        format!(
            "200 trials on a {}-qubit product: {successes} verified-equivalent successes, \
             {stalls} reported stalls (no theoretical stall target at q = 2)",
            p.n_qubits()
        ),
    );
}

#[test]
fn criterion_09_local_decoder_progress() {
    // Monotone progress and iteration bounds are asserted per invocation by
    // the sweep itself; every one of the |E| weight-1 errors must come back
    // verified-equivalent.
    let (lsv_cx, _) = lsv_complex();
    let report = sweep_weight1_local(lsv_cx.chain());
    assert_eq!(report.trials, lsv_cx.face_count(1));
    assert_eq!(report.stalls, 0);
    assert_eq!(report.equivalence_failures, 0);
    assert_eq!(report.successes, report.trials);
    pass(
        9,
        "local coboundary progress",
        format!(
            "all {} weight-1 errors decoded with strict weight decrease (mean iterations {:.3})",
            report.trials, report.mean_iterations
        ),
    );
}

#[test]
fn criterion_10_weight_audit() {
    let torus = fixture_torus(3, 3).unwrap().into_chain();
    let a1 = weight_audit(&build_product(&torus, &path_code(2).unwrap()).unwrap());
    assert!(a1.pass, "torus x path(2): {a1:?}");

    let (lsv_cx, _) = lsv_complex();
    let x = lsv_cx.chain().clone();
    let a2 = weight_audit(&build_product_sparse(&x, &path_code(3).unwrap()).unwrap());
    assert!(a2.pass, "LSV x path(3): {a2:?}");

    let ldpc = random_regular_ldpc(12, 3, 6, 7).unwrap();
    let a3 = weight_audit(&build_product_sparse(&x, &ldpc).unwrap());
    assert!(a3.pass, "LSV x LDPC: {a3:?}");
    pass(
        10,
        "weight audit",
        format!(
            "W_Z <= bound and W_X <= bound on all three products \
             (LSV x LDPC: W_Z {} <= {}, W_X {} <= {})",
            a3.w_z_max, a3.bound_z, a3.w_x_max, a3.bound_x
        ),
    );
}

#[test]
fn criterion_11_determinism() {
    // Identical config + seed => byte-identical serialized reports.
    let x = fixture_torus(3, 3).unwrap().into_chain();
    let p = build_product(&x, &path_code(3).unwrap()).unwrap();
    let run = || {
        let r = simulate_product(
            &p,
            ErrorType::Z,
            2,
            60,
            1111,
            ComponentDecoder::LocalCoboundary,
        )
        .unwrap();
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(run(), run());
    let run_x = || {
        let r = simulate_product(
            &p,
            ErrorType::X,
            2,
            60,
            2222,
            ComponentDecoder::LocalCoboundary,
        )
        .unwrap();
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(run_x(), run_x());
    let run_local = || {
        let r = simulate_local(&x, false, 2, 60, 3333);
        serde_json::to_string(&r).unwrap()
    };
    assert_eq!(run_local(), run_local());

    // Builds rerun identically too.
    let ctx = lsv::build_structure(2, 2, 2, &[1, 1, 1]).unwrap();
    let (c1, _) = lsv::build_quotient_complex(&ctx, 10_000).unwrap();
    let ctx2 = lsv::build_structure(2, 2, 2, &[1, 1, 1]).unwrap();
    let (c2, _) = lsv::build_quotient_complex(&ctx2, 10_000).unwrap();
    assert_eq!(
        qldpc::simplicial::simplicial_to_json(&c1),
        qldpc::simplicial::simplicial_to_json(&c2)
    );
    let l1 = random_regular_ldpc(48, 3, 6, 9).unwrap();
    let l2 = random_regular_ldpc(48, 3, 6, 9).unwrap();
    assert_eq!(gf2::matrix_to_text(l1.h()), gf2::matrix_to_text(l2.h()));
    pass(
        11,
        "determinism",
        "reports and builds are byte-identical across reruns".into(),
    );
}

// --- further spec'd examples at LSV scale (not numbered criteria) --------

#[test]
fn lsv_local_decoding_weight_up_to_3() {
    // Empirical success reporting at q = 2 (the theorem's guarantee needs
    // q > q0): every success must be verified equivalent; stalls are
    // reported, never fabricated corrections.
    let (lsv_cx, _) = lsv_complex();
    let mut successes = 0;
    let mut stalls = 0;
    let mut trials = 0;
    for (weight, n, seed) in [(1, 334, 91), (2, 333, 92), (3, 333, 93)] {
        let report = simulate_local(lsv_cx.chain(), false, weight, n, seed);
        assert_eq!(
            report.equivalence_failures, 0,
            "weight {weight}: {report:?}"
        );
        successes += report.successes;
        stalls += report.stalls;
        trials += report.trials;
    }
    assert_eq!(trials, 1000);
    assert_eq!(successes + stalls, 1000);
    println!(
        "lsv local decoding, weight <= 3: {successes}/1000 verified successes, {stalls} stalls"
    );
}

#[test]
fn single_edge_decoder_on_torus() {
    // The single-edge decoder's guarantee lives on 2-skeletons of
    // 3-dimensional complexes (out of build scope); exercised here on the
    // torus with success rates recorded and every success verified.
    let x = fixture_torus(5, 5).unwrap().into_chain();
    for (weight, seed) in [(1, 51), (2, 52)] {
        let report = simulate_local(&x, true, weight, 100, seed);
        assert_eq!(
            report.equivalence_failures, 0,
            "weight {weight}: {report:?}"
        );
        println!(
            "single-edge on T(5,5), weight {weight}: {}/{} successes, {} stalls",
            report.successes, report.trials, report.stalls
        );
    }
}

// Shared sanity check used by the criteria above: sampling helpers must be
// deterministic per (seed, trial).
#[test]
fn seeded_sampling_is_stable() {
    let mut rng = StdRng::seed_from_u64(99);
    let mut v: Vec<usize> = (0..10).collect();
    v.shuffle(&mut rng);
    let mut rng2 = StdRng::seed_from_u64(99);
    let mut w: Vec<usize> = (0..10).collect();
    w.shuffle(&mut rng2);
    assert_eq!(v, w);
}
