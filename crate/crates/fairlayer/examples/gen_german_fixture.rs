//! Regenerates the synthetic German Credit stand-in under
//! `fixtures/german/`.
//!
//! The real Statlog German Credit file cannot be vendored here, so the
//! case-study fixtures use a generated stand-in with the same shape
//! (space-delimited, 1000 rows, 20 attributes + outcome) and the same
//! published marginals:
//!
//! - outcomes: 700 good / 300 bad
//! - personal-status codes: A91=50, A92=310, A93=548, A94=92, A95=0
//!   (male 690 / female 310)
//! - sex-outcome joint: male 499 good / 191 bad, female 201 good /
//!   109 bad
//!
//! Feature columns carry a label signal that is noisier for female rows
//! than for male rows (label-consistent draws are flipped more often),
//! reproducing the unequal-data-quality pattern that makes a classifier
//! trained on the file less accurate for the unprivileged group in both
//! directions. Everything is drawn from a fixed-seed ChaCha stream:
//! rerunning this example rewrites byte-identical fixtures.
//!
//! ```bash
//! cargo run -p fairlayer --example gen_german_fixture
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6765726d616e; // "german"

/// Probability that a feature draw uses the opposite label's
/// distribution; higher for female rows.
const FLIP_MALE: f64 = 0.09;
const FLIP_FEMALE: f64 = 0.26;

struct RowPlan {
    code9: &'static str,
    male: bool,
    good: bool,
}

fn weighted<'a>(rng: &mut ChaCha8Rng, options: &[(&'a str, f64)]) -> &'a str {
    let total: f64 = options.iter().map(|(_, w)| w).sum();
    let mut draw = rng.gen::<f64>() * total;
    for (value, weight) in options {
        if draw < *weight {
            return value;
        }
        draw -= weight;
    }
    options.last().expect("non-empty options").0
}

/// Rough bell-shaped integer draw (sum of three uniforms).
fn bell(rng: &mut ChaCha8Rng, center: f64, spread: f64, min: i64, max: i64) -> i64 {
    let s: f64 = rng.gen::<f64>() + rng.gen::<f64>() + rng.gen::<f64>() - 1.5;
    ((center + s * spread).round() as i64).clamp(min, max)
}

fn effective_good(rng: &mut ChaCha8Rng, plan: &RowPlan) -> bool {
    let flip = if plan.male { FLIP_MALE } else { FLIP_FEMALE };
    if rng.gen::<f64>() < flip {
        !plan.good
    } else {
        plan.good
    }
}

fn render_row(rng: &mut ChaCha8Rng, plan: &RowPlan) -> String {
    // each feature re-rolls whether it sees the row's true label or its
    // opposite, so no single column is a clean proxy
    let mut fields: Vec<String> = Vec::with_capacity(21);
    let g = effective_good(rng, plan);

    // 1 checking account status
    fields.push(
        weighted(
            rng,
            if g {
                &[("A11", 1.5), ("A12", 2.5), ("A13", 1.0), ("A14", 5.0)]
            } else {
                &[("A11", 4.5), ("A12", 3.5), ("A13", 0.5), ("A14", 1.5)]
            },
        )
        .to_string(),
    );
    // 2 duration in months
    let g2 = effective_good(rng, plan);
    fields.push(bell(rng, if g2 { 17.0 } else { 28.0 }, 9.0, 4, 72).to_string());
    // 3 credit history
    let g3 = effective_good(rng, plan);
    fields.push(
        weighted(
            rng,
            if g3 {
                &[("A30", 0.3), ("A31", 0.3), ("A32", 5.5), ("A33", 0.9), ("A34", 3.0)]
            } else {
                &[("A30", 1.3), ("A31", 1.4), ("A32", 5.0), ("A33", 0.9), ("A34", 1.4)]
            },
        )
        .to_string(),
    );
    // 4 purpose
    fields.push(
        weighted(
            rng,
            &[
                ("A40", 2.3),
                ("A41", 1.0),
                ("A42", 1.8),
                ("A43", 2.8),
                ("A44", 0.1),
                ("A45", 0.2),
                ("A46", 0.5),
                ("A48", 0.1),
                ("A49", 1.0),
                ("A410", 0.1),
            ],
        )
        .to_string(),
    );
    // 5 credit amount
    let g5 = effective_good(rng, plan);
    let amount = if g5 {
        500 + (bell(rng, 2200.0, 1500.0, 0, 12000)).max(0)
    } else {
        700 + (bell(rng, 3800.0, 2500.0, 0, 17500)).max(0)
    };
    fields.push(amount.to_string());
    // 6 savings
    let g6 = effective_good(rng, plan);
    fields.push(
        weighted(
            rng,
            if g6 {
                &[("A61", 4.5), ("A62", 1.0), ("A63", 0.8), ("A64", 0.7), ("A65", 3.0)]
            } else {
                &[("A61", 7.5), ("A62", 1.2), ("A63", 0.4), ("A64", 0.3), ("A65", 0.6)]
            },
        )
        .to_string(),
    );
    // 7 present employment since
    let g7 = effective_good(rng, plan);
    fields.push(
        weighted(
            rng,
            if g7 {
                &[("A71", 0.4), ("A72", 1.4), ("A73", 3.3), ("A74", 2.0), ("A75", 2.9)]
            } else {
                &[("A71", 1.0), ("A72", 2.4), ("A73", 3.3), ("A74", 1.3), ("A75", 2.0)]
            },
        )
        .to_string(),
    );
    // 8 installment rate (% of disposable income)
    fields.push(weighted(rng, &[("1", 1.4), ("2", 2.3), ("3", 1.6), ("4", 4.7)]).to_string());
    // 9 personal status / sex
    fields.push(plan.code9.to_string());
    // 10 other debtors
    fields.push(weighted(rng, &[("A101", 9.1), ("A102", 0.4), ("A103", 0.5)]).to_string());
    // 11 present residence since
    fields.push(weighted(rng, &[("1", 1.3), ("2", 3.1), ("3", 1.5), ("4", 4.1)]).to_string());
    // 12 property
    let g12 = effective_good(rng, plan);
    fields.push(
        weighted(
            rng,
            if g12 {
                &[("A121", 3.2), ("A122", 2.3), ("A123", 3.3), ("A124", 1.2)]
            } else {
                &[("A121", 1.8), ("A122", 2.2), ("A123", 3.2), ("A124", 2.8)]
            },
        )
        .to_string(),
    );
    // 13 age in years
    let g13 = effective_good(rng, plan);
    fields.push(bell(rng, if g13 { 37.0 } else { 33.0 }, 11.0, 19, 75).to_string());
    // 14 other installment plans
    let g14 = effective_good(rng, plan);
    fields.push(
        weighted(
            rng,
            if g14 {
                &[("A141", 1.1), ("A142", 0.4), ("A143", 8.5)]
            } else {
                &[("A141", 1.9), ("A142", 0.6), ("A143", 7.5)]
            },
        )
        .to_string(),
    );
    // 15 housing
    fields.push(weighted(rng, &[("A151", 1.8), ("A152", 7.1), ("A153", 1.1)]).to_string());
    // 16 number of existing credits
    fields.push(weighted(rng, &[("1", 6.3), ("2", 3.3), ("3", 0.3), ("4", 0.1)]).to_string());
    // 17 job
    fields.push(
        weighted(
            rng,
            &[("A171", 0.2), ("A172", 2.0), ("A173", 6.3), ("A174", 1.5)],
        )
        .to_string(),
    );
    // 18 people liable for maintenance
    fields.push(weighted(rng, &[("1", 8.5), ("2", 1.5)]).to_string());
    // 19 telephone
    fields.push(weighted(rng, &[("A191", 6.0), ("A192", 4.0)]).to_string());
    // 20 foreign worker
    fields.push(weighted(rng, &[("A201", 9.6), ("A202", 0.4)]).to_string());
    // 21 outcome: 1 good, 2 bad
    fields.push(if plan.good { "1" } else { "2" }.to_string());

    fields.join(" ")
}

fn training_plans(rng: &mut ChaCha8Rng) -> Vec<RowPlan> {
    // sex-outcome joint of the published file
    let mut plans: Vec<RowPlan> = Vec::with_capacity(1000);
    // male personal-status codes, spread across good and bad rows
    let mut male_codes: Vec<&'static str> = Vec::with_capacity(690);
    male_codes.extend(std::iter::repeat_n("A91", 50));
    male_codes.extend(std::iter::repeat_n("A93", 548));
    male_codes.extend(std::iter::repeat_n("A94", 92));
    male_codes.shuffle(rng);
    for (count, good) in [(499usize, true), (191, false)] {
        for _ in 0..count {
            plans.push(RowPlan {
                code9: male_codes.pop().expect("690 male codes"),
                male: true,
                good,
            });
        }
    }
    for (count, good) in [(201usize, true), (109, false)] {
        for _ in 0..count {
            plans.push(RowPlan {
                code9: "A92",
                male: false,
                good,
            });
        }
    }
    plans.shuffle(rng);
    plans
}

/// Production sample for the layer-7 drift check: the sex distribution
/// shifts to 50/50 against the training file's 69/31.
fn production_plans(rng: &mut ChaCha8Rng) -> Vec<RowPlan> {
    let mut plans: Vec<RowPlan> = Vec::with_capacity(200);
    for (count, male, good) in [(72usize, true, true), (28, true, false)] {
        for _ in 0..count {
            plans.push(RowPlan {
                code9: if rng.gen::<f64>() < 0.08 { "A94" } else { "A93" },
                male,
                good,
            });
        }
    }
    for (count, good) in [(65usize, true), (35, false)] {
        for _ in 0..count {
            plans.push(RowPlan {
                code9: "A92",
                male: false,
                good,
            });
        }
    }
    plans.shuffle(rng);
    plans
}

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/german");
    std::fs::create_dir_all(&root).expect("create fixtures/german");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut data = String::new();
    for plan in training_plans(&mut rng) {
        let _ = writeln!(data, "{}", render_row(&mut rng, &plan));
    }
    let data_path = root.join("german.data");
    std::fs::write(&data_path, &data).expect("write german.data");
    println!("wrote {}", data_path.display());

    let mut production = String::new();
    for plan in production_plans(&mut rng) {
        let _ = writeln!(production, "{}", render_row(&mut rng, &plan));
    }
    let prod_path = root.join("production.data");
    std::fs::write(&prod_path, &production).expect("write production.data");
    println!("wrote {}", prod_path.display());
}
