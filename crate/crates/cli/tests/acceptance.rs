//! Acceptance gate: one test per release criterion, at the stated tolerances.
//!
//! Each test prints the evidence behind its verdict, so a failure carries its
//! own diagnosis. The suite drives the installed binary where the criterion is
//! about CLI output and calls the library directly where it is about numerics.

use std::process::{Command, Output};

use focal_rd::{
    ach_bound_n_letter, asymptotic_distortion_rate, converse_bound, exact_code_distortion,
    exhaustive_dstar, focal_distortion, focal_entropy, focal_entropy_max, focal_entropy_upper,
    focal_loss, iid_spectrum, inflection_count, information, optimize_fx, shannon_entropy,
    simplex_grid_max_focal_entropy, BoundReport, FxSearchConfig, Pmf,
};
use focal_rd_cli::binomial_parameter_audit;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run_ok(args: &[&str]) -> Output {
    let output = Command::new(env!("CARGO_BIN_EXE_focal-rd"))
        .args(args)
        .output()
        .expect("the focal-rd binary should spawn");
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

/// Parses CSV text into numeric rows after checking the header line.
fn numeric_rows(text: &str, expected_header: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    let header = lines.next().expect("CSV output should have a header");
    assert_eq!(header, expected_header, "unexpected CSV header");
    lines
        .map(|line| {
            line.split(',')
                .map(|field| field.parse().unwrap_or_else(|_| panic!("non-numeric field '{field}' in row '{line}'")))
                .collect()
        })
        .collect()
}

fn fig2_gamma_grid() -> Vec<f64> {
    (0..20).map(|j| 10.0 * j as f64 / 19.0).collect()
}

#[test]
fn criterion_01_alphabet_sweep_matches_reference_anchors() {
    let output = run_ok(&["sweep", "--figure", "fig1"]);
    let rows = numeric_rows(
        &String::from_utf8_lossy(&output.stdout),
        "alphabet_size,gamma,h_gamma",
    );
    assert_eq!(rows.len(), 4 * 49, "four curves over alphabet sizes 2..=50");
    let tolerance = 1e-5;
    let mut checked = 0usize;
    for row in &rows {
        let (size, gamma, h) = (row[0] as usize, row[1], row[2]);
        let anchor = if gamma == 0.5 {
            Some(0.292893218813452)
        } else if gamma == 1.0 {
            Some(if size == 2 { 0.5 } else { 0.52832083343362 })
        } else if gamma == 20.0 && size >= 12 {
            Some(2.95587160589104)
        } else if gamma == 100.0 && size >= 44 {
            Some(4.91150127694133)
        } else {
            None
        };
        if let Some(anchor) = anchor {
            assert!(
                (h - anchor).abs() <= tolerance,
                "h_gamma at size {size}, gamma {gamma}: got {h}, reference {anchor}"
            );
            checked += 1;
        }
    }
    println!("criterion 1: {checked} anchor values matched within {tolerance:e}");
}

#[test]
fn criterion_02_closed_form_entropy_anchors() {
    let two = Pmf::uniform(2).expect("uniform pmf");
    let three = Pmf::uniform(3).expect("uniform pmf");
    let anchor_two = 1.0 - 0.5_f64.sqrt();
    let anchor_three = 3.0_f64.log2() / 3.0;
    let h_two = focal_entropy(&two, 0.5);
    let h_three = focal_entropy(&three, 1.0);
    assert!(
        (h_two - anchor_two).abs() <= 1e-12,
        "focal entropy of uniform-2 at gamma 0.5: got {h_two}, closed form {anchor_two}"
    );
    assert!(
        (h_three - anchor_three).abs() <= 1e-12,
        "focal entropy of uniform-3 at gamma 1: got {h_three}, closed form {anchor_three}"
    );
    let max_two = focal_entropy_max(2, 0.5).expect("alphabet maximum").value;
    let max_three = focal_entropy_max(3, 1.0).expect("alphabet maximum").value;
    assert!(
        (max_two - anchor_two).abs() <= 1e-9,
        "alphabet-2 maximum at gamma 0.5 should be attained by the uniform pmf: {max_two} vs {anchor_two}"
    );
    assert!(
        (max_three - anchor_three).abs() <= 1e-9,
        "alphabet-3 maximum at gamma 1 should be attained by the uniform pmf: {max_three} vs {anchor_three}"
    );
    println!(
        "criterion 2: closed forms {anchor_two:.15} and {anchor_three:.15} hit within 1e-12, maxima within 1e-9"
    );
}

/// Best distortion over two-cell partitions of a three-symbol source when each
/// cell's reconstruction is restricted to the better of (a) the source
/// conditioned on the cell and (b) uniform over the cell. This restricted
/// search is how the second reference curve was evidently produced; the true
/// per-cell optimum can be strictly better.
fn restricted_two_cell_minimum(r: &Pmf, gamma: f64) -> f64 {
    let partitions: [[usize; 3]; 4] = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1]];
    partitions
        .iter()
        .map(|labels| {
            (0..=1)
                .map(|cell| {
                    let members: Vec<usize> =
                        (0..3).filter(|&i| labels[i] == cell).collect();
                    let mass: f64 = members.iter().map(|&i| r.get(i)).sum();
                    if members.is_empty() || mass <= 0.0 {
                        return 0.0;
                    }
                    let conditional: f64 = members
                        .iter()
                        .map(|&i| r.get(i) * focal_loss(r.get(i) / mass, gamma))
                        .sum();
                    let uniform: f64 = members
                        .iter()
                        .map(|&i| r.get(i) * focal_loss(1.0 / members.len() as f64, gamma))
                        .sum();
                    conditional.min(uniform)
                })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_03_two_message_optima_match_reference_curves() {
    const REFERENCE_X1: [f64; 20] = [
        0.6667, 0.4629, 0.3214, 0.2232, 0.1549, 0.1076, 0.0747, 0.0519, 0.0360, 0.0250, 0.0174,
        0.0121, 0.0084, 0.0058, 0.0040, 0.0028, 0.0019, 0.0014, 0.0009, 0.0007,
    ];
    const REFERENCE_X2: [f64; 20] = [
        0.270426041486378,
        0.193270123296634,
        0.147236206978196,
        0.111575341768706,
        0.0774696129173672,
        0.0537891332478085,
        0.0373471706724107,
        0.0259310956138338,
        0.0180046227767001,
        0.0125010699956052,
        0.0086798125666515,
        0.00602661581918083,
        0.00418443347170251,
        0.00290535916083735,
        0.00201726515920138,
        0.00140063878414086,
        0.000972499323993806,
        0.000675231148727989,
        0.000468830253105065,
        0.000325520833333333,
    ];
    let source1 = Pmf::uniform(3).expect("uniform pmf");
    let source2 =
        Pmf::from_values(&[2.0 / 3.0, 0.25, 1.0 / 12.0], true).expect("skewed pmf");

    let mut worst1 = (0.0_f64, 0.0_f64);
    let mut worst2 = (0.0_f64, 0.0_f64);
    let mut worst_restricted = 0.0_f64;
    println!("gamma      reference2        restricted2       true_optimum2     gap_to_reference");
    for (j, gamma) in fig2_gamma_grid().into_iter().enumerate() {
        let true1 = exhaustive_dstar(&source1, 2, gamma)
            .expect("oracle on uniform-3")
            .value;
        let gap1 = (true1 - REFERENCE_X1[j]).abs();
        if gap1 > worst1.1 {
            worst1 = (gamma, gap1);
        }

        let true2 = exhaustive_dstar(&source2, 2, gamma)
            .expect("oracle on skewed source")
            .value;
        let restricted2 = restricted_two_cell_minimum(&source2, gamma);
        let reproduction = (restricted2 - REFERENCE_X2[j]).abs();
        worst_restricted = worst_restricted.max(reproduction);
        assert!(
            reproduction <= 1e-12,
            "the restricted search should reproduce the second reference column exactly; \
             at gamma {gamma} it gives {restricted2} vs reference {}",
            REFERENCE_X2[j]
        );
        assert!(
            true2 <= restricted2 + 1e-12,
            "the unrestricted optimum can never exceed the restricted one: {true2} vs {restricted2} at gamma {gamma}"
        );
        let gap2 = (true2 - REFERENCE_X2[j]).abs();
        if gap2 > worst2.1 {
            worst2 = (gamma, gap2);
        }
        println!(
            "{gamma:<10.6} {:<17.15} {restricted2:<17.15} {true2:<17.15} {gap2:.3e}",
            REFERENCE_X2[j]
        );
    }

    assert!(
        worst1.1 <= 5e-4,
        "first reference column (uniform-3): worst gap {:.3e} at gamma {}",
        worst1.1,
        worst1.0
    );
    println!(
        "criterion 3: first column matches within 5e-4 (worst gap {:.2e}); \
         restricted search reproduces the second column to {worst_restricted:.1e}",
        worst1.1
    );
    assert!(
        worst2.1 <= 1e-4,
        "second reference column: worst gap {:.3e} at gamma {:.6}, tolerance 1e-4.\n\
         The table above shows why this cannot pass: the reference values coincide (to {worst_restricted:.1e}) \
         with a restricted search that only considers the cell-conditional and cell-uniform reconstructions, \
         but for this skewed source the per-cell optimum lies strictly between those two choices once gamma > 0. \
         The certified exhaustive optimum is therefore below the reference curve by up to {:.2e}. \
         Meeting the 1e-4 tolerance would require reproducing the restriction, i.e. returning values that are \
         provably not the minimum this criterion asks for. The implementation keeps the true optimum and this \
         check reports the discrepancy instead of masking it.",
        worst2.1,
        worst2.0,
        worst2.1
    );
}

/// Shared chain checks for a fig4-style sweep body (columns gamma, converse,
/// ach_linear, ach_log, ach_exact, optional optimized column).
fn check_fig4_rows(rows: &[Vec<f64>]) {
    assert_eq!(rows.len(), 40, "the preset grid has 40 points");
    let slack = 1e-12;
    let mut previous_converse = f64::INFINITY;
    for row in rows {
        let (gamma, converse, ach_linear, ach_log, ach_exact) =
            (row[0], row[1], row[2], row[3], row[4]);
        assert!(
            converse <= ach_exact + slack,
            "converse {converse} exceeds exact code distortion {ach_exact} at gamma {gamma}"
        );
        assert!(
            ach_exact <= ach_log + slack,
            "exact code distortion {ach_exact} exceeds the log-form bound {ach_log} at gamma {gamma}"
        );
        assert!(
            ach_log <= ach_linear + slack,
            "log-form bound {ach_log} exceeds the linear-form bound {ach_linear} at gamma {gamma}"
        );
        assert!(
            converse <= previous_converse + slack,
            "converse increased from {previous_converse} to {converse} at gamma {gamma}"
        );
        previous_converse = converse;
    }
}

#[test]
fn criterion_04_binomial_sweep_is_internally_consistent() {
    let output = run_ok(&["sweep", "--figure", "fig4"]);
    let rows = numeric_rows(
        &String::from_utf8_lossy(&output.stdout),
        "gamma,converse,ach_linear,ach_log,ach_exact",
    );
    check_fig4_rows(&rows);
    let r = Pmf::binomial(100, 0.1).expect("binomial source");
    let expected = (shannon_entropy(&r) - 3.0).max(0.0);
    let at_zero = rows[0][1];
    assert_eq!(rows[0][0], 0.0, "the grid starts at gamma 0");
    assert!(
        (at_zero - expected).abs() <= 1e-12,
        "converse at gamma 0 should equal max(0, H - 3): got {at_zero}, expected {expected}"
    );
    println!(
        "criterion 4: 40 rows chain-consistent at 1e-12; converse(0) = {at_zero:.15} = max(0, H-3)"
    );
}

#[test]
fn criterion_05_source_parameter_audit_flags_the_mismatch() {
    let audit = binomial_parameter_audit();
    assert!(
        audit.gap > 0.1,
        "entropy gap {} should exceed 0.1 bits",
        audit.gap
    );
    assert!(audit.flagged, "the audit should flag the inconsistency");
    assert!(
        (audit.best_p - 0.15).abs() <= 1e-12,
        "closest grid parameter should be 0.15, got {}",
        audit.best_p
    );
    assert!(
        audit.best_p >= 0.05 && audit.best_p <= 0.5,
        "candidate parameter {} should stay in [0.05, 0.5]",
        audit.best_p
    );

    let stated = run_ok(&["sweep", "--figure", "fig4"]);
    let stderr = String::from_utf8_lossy(&stated.stderr);
    assert!(
        stderr.contains("audit:") && stderr.contains("inconsistent"),
        "the sweep should print the audit verdict on stderr, got: {stderr}"
    );
    check_fig4_rows(&numeric_rows(
        &String::from_utf8_lossy(&stated.stdout),
        "gamma,converse,ach_linear,ach_log,ach_exact",
    ));

    let alternate = run_ok(&["sweep", "--figure", "fig4", "--alt-p", "0.15"]);
    let alt_rows = numeric_rows(
        &String::from_utf8_lossy(&alternate.stdout),
        "gamma,converse,ach_linear,ach_log,ach_exact",
    );
    check_fig4_rows(&alt_rows);
    let alt_entropy = shannon_entropy(&Pmf::binomial(100, 0.15).expect("binomial source"));
    assert!(
        (alt_rows[0][1] - (alt_entropy - 3.0).max(0.0)).abs() <= 1e-12,
        "the alternate-parameter sweep should satisfy the same converse identity"
    );
    println!(
        "criterion 5: gap {:.6} bits flagged; closest parameter {:.3} (H = {:.6}); both sweeps chain-clean",
        audit.gap, audit.best_p, audit.best_p_entropy
    );
}

#[test]
fn criterion_06_sandwich_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE55ED);
    let slack_oracle = 1e-9;
    let slack_chain = 1e-12;
    for instance in 0..25 {
        let alphabet = rng.gen_range(2..=6usize);
        let m = rng.gen_range(1..=3usize);
        let gamma = rng.gen_range(0.0..=4.0f64);
        let values: Vec<f64> = (0..alphabet).map(|_| rng.gen_range(0.01..1.0)).collect();
        let r = Pmf::from_values(&values, true).expect("random pmf");

        let converse = converse_bound(&r, m, gamma).expect("converse bound");
        let dstar = exhaustive_dstar(&r, m, gamma).expect("oracle").value;
        let exact = exact_code_distortion(&r, &r, m, gamma).expect("greedy code distortion");
        assert!(
            converse <= dstar + slack_oracle,
            "instance {instance} (alphabet {alphabet}, m {m}, gamma {gamma:.4}): \
             converse {converse} exceeds the exhaustive optimum {dstar}"
        );
        assert!(
            dstar <= exact + slack_oracle,
            "instance {instance} (alphabet {alphabet}, m {m}, gamma {gamma:.4}): \
             exhaustive optimum {dstar} exceeds the greedy code distortion {exact}"
        );
        if alphabet > m {
            let report = BoundReport::compute(&r, &r, m, gamma).expect("bound report");
            assert!(
                report.exact_code <= report.ach_log + slack_chain
                    && report.ach_log <= report.ach_linear + slack_chain,
                "instance {instance}: bound chain violated ({} / {} / {})",
                report.exact_code,
                report.ach_log,
                report.ach_linear
            );
        }
    }
    println!("criterion 6: 25 seeded instances sandwiched (converse <= optimum <= greedy)");
}

#[test]
fn criterion_07_structured_maximum_beats_full_simplex_grid() {
    for size in [3usize, 4] {
        for gamma in [0.5f64, 2.0, 7.0] {
            let grid = simplex_grid_max_focal_entropy(size, gamma, 0.02)
                .expect("full-simplex grid search");
            let structured = focal_entropy_max(size, gamma).expect("structured maximum").value;
            let upper = focal_entropy_upper(gamma);
            assert!(
                grid <= structured + 1e-9,
                "size {size}, gamma {gamma}: a grid point beat the structured maximum ({grid} vs {structured})"
            );
            assert!(
                structured - grid <= 5e-3,
                "size {size}, gamma {gamma}: grid search should land within 5e-3 of the maximum \
                 ({grid} vs {structured})"
            );
            assert!(
                structured <= upper + 1e-12,
                "size {size}, gamma {gamma}: maximum {structured} exceeds the closed-form ceiling {upper}"
            );
            println!(
                "criterion 7: size {size}, gamma {gamma}: grid {grid:.12} <= max {structured:.12} <= ceiling {upper:.12}"
            );
        }
    }
}

#[test]
fn criterion_08_blocklength_bounds_approach_the_limit() {
    let r = Pmf::from_values(&[0.8, 0.2], true).expect("bernoulli source");
    let rate = 0.5;
    for gamma in [0.0f64, 2.0] {
        let b25 = ach_bound_n_letter(&r, &r, 25, rate, gamma).expect("blocklength-25 bound");
        let b200 = ach_bound_n_letter(&r, &r, 200, rate, gamma).expect("blocklength-200 bound");
        assert!(
            b200 <= b25 + 1e-12,
            "gamma {gamma}: the per-symbol bound should not grow with blocklength ({b200} vs {b25})"
        );
        assert!(
            (b200 - 0.221928).abs() <= 0.06,
            "gamma {gamma}: blocklength-200 bound {b200} should sit within 0.06 of the limit 0.221928"
        );
        println!("criterion 8: gamma {gamma}: bound falls {b25:.9} -> {b200:.9}");
    }
    let limit = asymptotic_distortion_rate(&r, rate).expect("distortion-rate limit");
    let expected = (shannon_entropy(&r) - rate).max(0.0);
    assert_eq!(
        limit, expected,
        "the limit should be exactly max(0, H - R) (and carries no focus parameter at all)"
    );
    println!("criterion 8: limit {limit:.15} = max(0, H - R), independent of the focus parameter");
}

#[test]
fn criterion_09_reconstruction_search_dominates_baseline() {
    let args = [
        "sweep",
        "--figure",
        "fig4",
        "--fx",
        "optimize",
        "--fx-starts",
        "2",
        "--fx-iterations",
        "30",
        "--seed",
        "11",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(
        first.stdout, second.stdout,
        "repeated optimizer sweeps under one seed should be byte-identical"
    );
    let rows = numeric_rows(
        &String::from_utf8_lossy(&first.stdout),
        "gamma,converse,ach_linear,ach_log,ach_exact,ach_exact_optfx",
    );
    assert_eq!(rows.len(), 40);
    for row in &rows {
        let (gamma, exact, optimized) = (row[0], row[4], row[5]);
        assert!(
            optimized <= exact,
            "gamma {gamma}: optimized reconstruction {optimized} lost to the baseline {exact}"
        );
    }

    let r = Pmf::binomial(100, 0.1).expect("binomial source");
    for (i, gamma) in [0.0f64, 10.0 / 3.0, 10.0].into_iter().enumerate() {
        let config = FxSearchConfig {
            starts: 2,
            iterations: 30,
            seed: 11 + i as u64,
            ..FxSearchConfig::default()
        };
        let optimum = optimize_fx(&r, 8, gamma, &config).expect("reconstruction search");
        let baseline = exact_code_distortion(&r, &r, 8, gamma).expect("baseline distortion");
        assert!(
            optimum.value <= baseline,
            "gamma {gamma}: searched value {} lost to baseline {baseline}",
            optimum.value
        );
    }
    println!("criterion 9: optimizer dominates the baseline on all 40 grid rows, byte-reproducibly");
}

/// Exhaustively enumerates all length-`n` strings and accumulates the total
/// information mass, as an independent check of the convolution-based spectrum.
fn brute_force_information_masses(p: &Pmf, n: usize) -> Vec<(f64, f64)> {
    let k = p.len();
    let mut accumulated: Vec<(f64, f64)> = Vec::new();
    let mut string = vec![0usize; n];
    loop {
        let mass: f64 = string.iter().map(|&x| p.get(x)).product();
        if mass > 0.0 {
            let value: f64 = string.iter().map(|&x| information(p, x)).sum();
            match accumulated
                .iter_mut()
                .find(|(v, _)| (*v - value).abs() <= 1e-9)
            {
                Some((_, m)) => *m += mass,
                None => accumulated.push((value, mass)),
            }
        }
        let mut position = 0;
        loop {
            if position == n {
                accumulated.sort_by(|a, b| a.0.total_cmp(&b.0));
                return accumulated;
            }
            string[position] += 1;
            if string[position] < k {
                break;
            }
            string[position] = 0;
            position += 1;
        }
    }
}

#[test]
fn criterion_10_property_suites_hold_on_seeded_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x10AD);

    // Monotonicity in the focus parameter and non-negativity, on 100 random pmfs.
    let ladder = [0.0f64, 0.25, 0.5, 1.0, 2.0, 5.0];
    for _ in 0..100 {
        let len = rng.gen_range(2..=8usize);
        let values: Vec<f64> = (0..len).map(|_| rng.gen_range(0.01..1.0)).collect();
        let p = Pmf::from_values(&values, true).expect("random pmf");
        let mut previous = -1e-12;
        for &gamma in &ladder {
            let h = focal_entropy(&p, gamma);
            assert!(
                h >= -1e-12,
                "focal entropy went negative beyond rounding noise: {h} at gamma {gamma}"
            );
            assert!(
                h + 1e-12 >= previous,
                "focal entropy decreased along the gamma ladder: {previous} -> {h} at gamma {gamma}"
            );
            previous = h;
        }
        // At gamma 0 every focal quantity collapses to its log-loss counterpart.
        assert!(
            focal_entropy(&p, 0.0).abs() <= 1e-12,
            "focal entropy at gamma 0 should vanish"
        );
        for x in 0..len {
            let collapse = (focal_distortion(x, &p, 0.0) - information(&p, x)).abs();
            assert!(
                collapse <= 1e-12,
                "focal distortion at gamma 0 should equal the information value (off by {collapse})"
            );
        }
    }

    // The power curve has exactly one inflection point for positive gamma.
    for gamma in [0.25f64, 0.5, 1.0, 3.0, 10.0] {
        let count = inflection_count(gamma, 20_001).expect("inflection scan");
        assert_eq!(count, 1, "gamma {gamma}: expected a single inflection, found {count}");
    }

    // Convolution-based spectra agree with brute-force enumeration.
    let mut cases = 0usize;
    while cases < 20 {
        let k = rng.gen_range(2..=4usize);
        let n = rng.gen_range(1..=6usize);
        let values: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
        let p = Pmf::from_values(&values, true).expect("random pmf");
        let spectrum = iid_spectrum(&p, &p, n).expect("spectrum");
        let expected = brute_force_information_masses(&p, n);
        assert_eq!(
            spectrum.len(),
            expected.len(),
            "atom count mismatch for k={k}, n={n}"
        );
        for (atom, (value, mass)) in spectrum.atoms().iter().zip(&expected) {
            assert!(
                (atom.value - value).abs() <= 1e-9 && (atom.mass - mass).abs() <= 1e-10,
                "spectrum atom ({}, {}) should match brute force ({value}, {mass}) for k={k}, n={n}",
                atom.value,
                atom.mass
            );
        }
        cases += 1;
    }
    println!("criterion 10: 100 pmf property checks, 5 inflection scans, 20 spectrum cases all hold");
}
