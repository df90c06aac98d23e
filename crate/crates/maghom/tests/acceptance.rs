//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single PASS or FAIL line (visible with `--nocapture`) and fails the
//! test run on any violated assertion.

use maghom::chain::MagnitudeComplex;
use maghom::graph::{
    self, all_trees, connected_graphs, from_spec, named, Graph,
};
use maghom::homology::{mh_table, HomologyTable, Method, TableConfig};
use maghom::morse::{
    check_acyclic, homology_equivalence_check, reduce, reduced_slice, witness_is_valid,
    BasedComplex, Matching,
};
use maghom::rules::{
    generate_matching, non_morse_rule, rule_for, t_even, t_odd, validate_rule,
};
use maghom::series::{chain_euler, magnitude_series, RationalFunction};
use maghom::DEFAULT_GENERATOR_CAP as CAP;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn criterion(n: usize, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("criterion {:2}: PASS - {}", n, detail),
        Err(detail) => {
            println!("criterion {:2}: FAIL - {}", n, detail);
            panic!("criterion {} failed: {}", n, detail);
        }
    }
}

fn err(e: maghom::Error) -> String {
    e.to_string()
}

fn naive_table(g: &Graph, name: &str, lmax: u32) -> Result<HomologyTable, String> {
    mh_table(g, name, lmax, &Method::Naive, &TableConfig::default()).map_err(err)
}

struct MorseTarget {
    label: String,
    graph: Graph,
    rule: &'static str,
}

/// Every rule paired with the graphs it is proven Morse on: the tree rule
/// on all trees up to 7 vertices, the pawful rule on three pawful graphs,
/// the icosahedral rule, the cycle rules on C_5..C_8, and the
/// geodetic-ptolemaic rule on a block graph with three blocks.
fn morse_targets() -> Vec<MorseTarget> {
    let mut targets = Vec::new();
    for n in 1..=7 {
        for (i, tree) in all_trees(n).into_iter().enumerate() {
            targets.push(MorseTarget {
                label: format!("tree n={} #{}", n, i),
                graph: tree,
                rule: "tree",
            });
        }
    }
    for spec in ["complement(cycle(6))", "complement(cycle(7))", "join(path(2),path(3))"] {
        targets.push(MorseTarget {
            label: spec.to_string(),
            graph: from_spec(spec).expect("spec parses"),
            rule: "pawful",
        });
    }
    targets.push(MorseTarget {
        label: "icosahedron".to_string(),
        graph: named::icosahedron(),
        rule: "icosa",
    });
    for n in [5usize, 7] {
        targets.push(MorseTarget {
            label: format!("cycle({})", n),
            graph: named::cycle(n).expect("cycle builds"),
            rule: "odd-cycle",
        });
    }
    for n in [6usize, 8] {
        targets.push(MorseTarget {
            label: format!("cycle({})", n),
            graph: named::cycle(n).expect("cycle builds"),
            rule: "even-cycle",
        });
    }
    targets.push(MorseTarget {
        label: "three-block block graph".to_string(),
        graph: Graph::new(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)])
            .expect("block graph builds"),
        rule: "geopto",
    });
    targets
}

#[test]
fn criterion_01_alternating_rank_sums_categorify_magnitude() {
    criterion(1, (|| -> Outcome {
        let specs = [
            "path(4)",
            "cycle(5)",
            "cycle(6)",
            "complement(cycle(6))",
            "icosahedron",
            "rook44",
            "shrikhande",
            "dodecahedron",
            "desargues",
        ];
        for spec in specs {
            let g = from_spec(spec).map_err(err)?;
            let coeffs = magnitude_series(&g, 5).map_err(err)?.integer_coeffs().map_err(err)?;
            let table = naive_table(&g, spec, 4)?;
            for l in 0..=4u32 {
                let mut euler = BigInt::from(0);
                for e in table.entries.iter().filter(|e| e.l == l) {
                    let term = BigInt::from(e.rank);
                    if e.k % 2 == 0 {
                        euler += term;
                    } else {
                        euler -= term;
                    }
                }
                let chain = chain_euler(&g, l).map_err(err)?;
                if euler != coeffs[l as usize] || chain != coeffs[l as usize] {
                    return Err(format!(
                        "{} at l={}: homology Euler {}, chain Euler {}, series coefficient {}",
                        spec, l, euler, chain, coeffs[l as usize]
                    ));
                }
            }
        }
        Ok(format!(
            "alternating rank sums equal magnitude coefficients for {} graphs, l <= 4 \
             (chain-level Euler counts agree)",
            specs.len()
        ))
    })());
}

#[test]
fn criterion_02_odd_cycle_ranks_match_recurrence() {
    criterion(2, (|| -> Outcome {
        for m in [2u32, 3] {
            let spec = format!("cycle({})", 2 * m + 1);
            let g = from_spec(&spec).map_err(err)?;
            let table = naive_table(&g, &spec, 5)?;
            for l in 0..=5u32 {
                for k in 0..=l as usize {
                    let e = table
                        .get(k, l)
                        .ok_or_else(|| format!("{} missing entry (k={}, l={})", spec, k, l))?;
                    let expected = t_odd(m, k as i64, l as i64);
                    if e.rank as u64 != expected || !e.torsion.is_empty() {
                        return Err(format!(
                            "{} at (k={}, l={}): got {}, recurrence gives rank {}",
                            spec,
                            k,
                            l,
                            e.group(),
                            expected
                        ));
                    }
                }
            }
        }
        Ok("C_5 and C_7 ranks equal the odd recurrence and are torsion-free for k <= l <= 5"
            .to_string())
    })());
}

#[test]
fn criterion_03_even_cycle_ranks_match_recurrence_and_reduce_to_zero() {
    criterion(3, (|| -> Outcome {
        for m in [3u32, 4] {
            let spec = format!("cycle({})", 2 * m);
            let g = from_spec(&spec).map_err(err)?;
            let table = naive_table(&g, &spec, 5)?;
            for l in 0..=5u32 {
                for k in 0..=l as usize {
                    let e = table
                        .get(k, l)
                        .ok_or_else(|| format!("{} missing entry (k={}, l={})", spec, k, l))?;
                    let expected = t_even(m, k as i64, l as i64);
                    if e.rank as u64 != expected || !e.torsion.is_empty() {
                        return Err(format!(
                            "{} at (k={}, l={}): got {}, recurrence gives rank {}",
                            spec,
                            k,
                            l,
                            e.group(),
                            expected
                        ));
                    }
                }
            }
            let d = g.apsp().map_err(err)?;
            for l in 0..=5u32 {
                let (_, diffs) = reduced_slice(&g, &d, l, "even-cycle", CAP).map_err(err)?;
                if !diffs.iter().all(|mat| mat.is_zero()) {
                    return Err(format!("{} reduced complex at l={} has nonzero entries", spec, l));
                }
            }
        }
        Ok("C_6 and C_8 ranks equal the even recurrence, torsion-free, and the reduced \
            differentials vanish for l <= 5"
            .to_string())
    })());
}

#[test]
fn criterion_04_rules_are_valid_and_morse_on_their_targets() {
    criterion(4, (|| -> Outcome {
        let targets = morse_targets();
        for target in &targets {
            let d = target.graph.apsp().map_err(err)?;
            let rule = rule_for(target.rule, &target.graph, &d)
                .map_err(|e| format!("{}: {}", target.label, e))?;
            validate_rule(&rule, &d, 4).map_err(|e| format!("{}: {}", target.label, e))?;
            for l in 0..=4u32 {
                let complex = MagnitudeComplex::build(&d, l, CAP).map_err(err)?;
                let matching = generate_matching(&complex, &rule, &d)
                    .map_err(|e| format!("{} l={}: {}", target.label, l, e))?;
                let based = BasedComplex::from(&complex);
                if check_acyclic(&based, &matching).is_err() {
                    return Err(format!(
                        "{} l={}: matched differential graph has a zig-zag cycle",
                        target.label, l
                    ));
                }
            }
        }
        Ok(format!("{} rule/graph targets validate and stay acyclic for l <= 4", targets.len()))
    })());
}

#[test]
fn criterion_05_non_morse_example_yields_the_known_cycle() {
    criterion(5, (|| -> Outcome {
        let g = named::non_morse_example();
        let d = g.apsp().map_err(err)?;
        let rule = non_morse_rule();
        validate_rule(&rule, &d, 3).map_err(err)?;
        let complex = MagnitudeComplex::build(&d, 3, CAP).map_err(err)?;
        let matching = generate_matching(&complex, &rule, &d).map_err(err)?;
        let based = BasedComplex::from(&complex);
        let w = match check_acyclic(&based, &matching) {
            Ok(_) => return Err("expected a zig-zag cycle at l = 3, found none".to_string()),
            Err(w) => w,
        };
        if w.upper_degree != 3 || w.uppers.len() != 4 {
            return Err(format!(
                "cycle has {} uppers in degree {}, expected 4 in degree 3",
                w.uppers.len(),
                w.upper_degree
            ));
        }
        if !witness_is_valid(&based, &matching, &w) {
            return Err("witness fails replay against the matched differential graph".to_string());
        }
        let mut found: Vec<Vec<u32>> = w
            .uppers
            .iter()
            .map(|&id| complex.sets[3].get(id as usize).vertices.clone())
            .chain(w.lowers.iter().map(|&id| complex.sets[2].get(id as usize).vertices.clone()))
            .collect();
        found.sort();
        let mut expected: Vec<Vec<u32>> = vec![
            vec![0, 1, 3, 5],
            vec![0, 1, 5],
            vec![0, 1, 4, 5],
            vec![0, 4, 5],
            vec![0, 2, 4, 5],
            vec![0, 2, 5],
            vec![0, 2, 3, 5],
            vec![0, 3, 5],
        ];
        expected.sort();
        if found != expected {
            return Err(format!("cycle hits {:?}, expected the known eight generators", found));
        }
        match reduce(&based, &matching) {
            Err(maghom::Error::NotMorse(4, 3)) => {}
            other => {
                return Err(format!(
                    "reduce should refuse with a 4-generator degree-3 cycle, got {:?}",
                    other.map(|r| r.sizes())
                ))
            }
        }
        Ok("valid but non-Morse rule produces exactly the known eight-generator zig-zag cycle"
            .to_string())
    })());
}

#[test]
fn criterion_06_diagonality_theorems() {
    criterion(6, (|| -> Outcome {
        let diagonal_targets: Vec<MorseTarget> = morse_targets()
            .into_iter()
            .filter(|t| t.rule != "odd-cycle" && t.rule != "even-cycle")
            .collect();
        for target in &diagonal_targets {
            let table = naive_table(&target.graph, &target.label, 4)?;
            if !table.is_diagonal() {
                let bad = table
                    .entries
                    .iter()
                    .find(|e| e.k as u32 != e.l && !(e.rank == 0 && e.torsion.is_empty()))
                    .expect("non-diagonal table has an off-diagonal entry");
                return Err(format!(
                    "{}: off-diagonal MH_{{{},{}}} = {}",
                    target.label,
                    bad.k,
                    bad.l,
                    bad.group()
                ));
            }
        }
        Ok(format!(
            "trees, pawful graphs, the icosahedron, and a block graph: {} graphs diagonal up \
             to l = 4",
            diagonal_targets.len()
        ))
    })());
}

#[test]
fn criterion_07_rook_and_shrikhande_share_magnitude_but_not_homology() {
    criterion(7, (|| -> Outcome {
        let rook = from_spec("rook44").map_err(err)?;
        let shr = from_spec("shrikhande").map_err(err)?;
        let order = 7;
        let rook_series = magnitude_series(&rook, order).map_err(err)?;
        let shr_series = magnitude_series(&shr, order).map_err(err)?;
        let closed =
            RationalFunction::new(vec![16.into()], vec![1.into(), 6.into(), 9.into()])
                .map_err(err)?;
        if rook_series != shr_series || rook_series != closed.expand(order) {
            return Err("magnitude series disagree or miss the closed form".to_string());
        }
        let rook_table = naive_table(&rook, "rook44", 4)?;
        let shr_table = naive_table(&shr, "shrikhande", 4)?;
        let diag = [16usize, 96, 432, 1728, 6480];
        for (l, &expected) in diag.iter().enumerate() {
            let e = rook_table.get(l, l as u32).expect("diagonal entry exists");
            if e.rank != expected || !e.torsion.is_empty() {
                return Err(format!("rook44 MH_{{{0},{0}}} = {1}, expected rank {2}", l, e.group(), expected));
            }
        }
        if !rook_table.is_diagonal() {
            return Err("rook44 has a nonzero off-diagonal entry".to_string());
        }
        if rook_table.rank(3, 4) != 0 || shr_table.rank(3, 4) != 144 {
            return Err(format!(
                "separating entry: rook MH_{{3,4}} rank {}, shrikhande MH_{{3,4}} rank {}",
                rook_table.rank(3, 4),
                shr_table.rank(3, 4)
            ));
        }
        Ok("equal magnitude 16/(1 + 6q + 9q^2); rook diagonal 16, 96, 432, 1728, 6480; \
            MH_{3,4} separates (0 vs 144)"
            .to_string())
    })());
}

#[test]
fn criterion_08_dodecahedron_and_desargues_share_magnitude_but_not_homology() {
    criterion(8, (|| -> Outcome {
        let dod = from_spec("dodecahedron").map_err(err)?;
        let des = from_spec("desargues").map_err(err)?;
        let order = 7;
        let dod_series = magnitude_series(&dod, order).map_err(err)?;
        let des_series = magnitude_series(&des, order).map_err(err)?;
        let closed = RationalFunction::new(
            vec![20.into()],
            vec![1.into(), 3.into(), 6.into(), 6.into(), 3.into(), 1.into()],
        )
        .map_err(err)?;
        if dod_series != des_series || dod_series != closed.expand(order) {
            return Err("magnitude series disagree or miss the closed form".to_string());
        }
        let dod_table = naive_table(&dod, "dodecahedron", 4)?;
        let des_table = naive_table(&des, "desargues", 4)?;
        if dod_table.rank(2, 4) != 60 || des_table.rank(2, 4) != 0 {
            return Err(format!(
                "separating entry: dodecahedron MH_{{2,4}} rank {}, desargues MH_{{2,4}} rank {}",
                dod_table.rank(2, 4),
                des_table.rank(2, 4)
            ));
        }
        if des_table.rank(3, 4) != 300 {
            return Err(format!(
                "desargues MH_{{3,4}} rank {}, expected 300",
                des_table.rank(3, 4)
            ));
        }
        Ok("equal magnitude 20/(1 + 3q + 6q^2 + 6q^3 + 3q^4 + q^5); MH_{2,4} separates \
            (60 vs 0)"
            .to_string())
    })());
}

fn random_connected_graph(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let n = rng.random_range(2..=7usize);
        let p = rng.random_range(0.25..0.75f64);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).expect("pair loop emits no self-loops");
        if g.is_connected() {
            return g;
        }
    }
}

#[test]
fn criterion_09_reduction_preserves_homology() {
    criterion(9, (|| -> Outcome {
        const SEED: u64 = 20250819;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for i in 0..50 {
            let g = random_connected_graph(&mut rng);
            let d = g.apsp().map_err(err)?;
            for l in 0..=3u32 {
                let complex = MagnitudeComplex::build(&d, l, CAP).map_err(err)?;
                let based = BasedComplex::from(&complex);
                let reduced =
                    reduce(&based, &Matching::empty(based.sizes.len())).map_err(err)?;
                if !homology_equivalence_check(&based, &reduced) {
                    return Err(format!(
                        "random graph #{} ({} vertices) at l={}: empty-matching reduction \
                         changed homology",
                        i,
                        g.vertex_count(),
                        l
                    ));
                }
            }
        }
        let targets = morse_targets();
        for target in &targets {
            let d = target.graph.apsp().map_err(err)?;
            let rule = rule_for(target.rule, &target.graph, &d).map_err(err)?;
            for l in 0..=3u32 {
                let complex = MagnitudeComplex::build(&d, l, CAP).map_err(err)?;
                let matching = generate_matching(&complex, &rule, &d).map_err(err)?;
                let based = BasedComplex::from(&complex);
                let reduced = reduce(&based, &matching).map_err(err)?;
                if !homology_equivalence_check(&based, &reduced) {
                    return Err(format!(
                        "{} at l={}: rule reduction changed homology",
                        target.label, l
                    ));
                }
            }
        }
        Ok(format!(
            "seed {}: 50 random connected graphs under the empty matching and {} rule \
             matchings keep naive homology at l <= 3",
            SEED,
            targets.len()
        ))
    })());
}

#[test]
fn criterion_10_ptolemaic_characterizations_agree_exhaustively() {
    criterion(10, (|| -> Outcome {
        let expected_counts = [1usize, 1, 2, 6, 21, 112, 853];
        let mut total = 0;
        for n in 1..=7usize {
            let graphs = connected_graphs(n);
            if graphs.len() != expected_counts[n - 1] {
                return Err(format!(
                    "{} connected graphs on {} vertices, expected {}",
                    graphs.len(),
                    n,
                    expected_counts[n - 1]
                ));
            }
            for g in &graphs {
                let d = g.apsp().map_err(err)?;
                let inequality = graph::is_ptolemaic(&d);
                let concatenation = graph::ptolemaic_char2(&d);
                let localized = graph::ptolemaic_char3(&d);
                let structural = graph::is_chordal(g) && graph::is_distance_hereditary(g);
                if inequality != concatenation
                    || inequality != localized
                    || inequality != structural
                {
                    return Err(format!(
                        "characterizations split on {:?}: inequality={} concatenation={} \
                         localized={} chordal&dh={}",
                        g.edges(),
                        inequality,
                        concatenation,
                        localized,
                        structural
                    ));
                }
                if graph::is_geodetic(g, &d) && inequality && !graph::is_block_graph(g) {
                    return Err(format!(
                        "geodetic ptolemaic graph that is not a block graph: {:?}",
                        g.edges()
                    ));
                }
            }
            total += graphs.len();
        }
        Ok(format!(
            "all four ptolemaic characterizations agree on {} connected graphs with n <= 7; \
             geodetic + ptolemaic implies block graph",
            total
        ))
    })());
}
