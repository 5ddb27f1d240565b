//! The twelve acceptance criteria. Each test prints one line:
//! `criterion N: PASS|FAIL <title> (<summary>)`, followed by details on failure.
//!
//! Run with `cargo test -p ramsey-exp --test acceptance -- --nocapture`.

use ramsey_exp::suite;

fn check(id: u8) {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let start = std::time::Instant::now();
    let outcome = suite::criterion(id, workers).expect("criterion ran");
    println!("{} [{:.1}s]", outcome.line(), start.elapsed().as_secs_f64());
    if !outcome.pass {
        for d in &outcome.details {
            println!("    {d}");
        }
    }
    assert!(outcome.pass, "{}", outcome.line());
}

#[test]
fn criterion_01_greedy_span_bound() {
    check(1);
}

#[test]
fn criterion_02_spanning_tree_bound() {
    check(2);
}

#[test]
fn criterion_03_hard_instance_floor() {
    check(3);
}

#[test]
fn criterion_04_ball_process_tail() {
    check(4);
}

#[test]
fn criterion_05_z5d_ramsey() {
    check(5);
}

#[test]
fn criterion_06_coprime6() {
    check(6);
}

#[test]
fn criterion_07_counting() {
    check(7);
}

#[test]
fn criterion_08_dimension_witness() {
    check(8);
}

#[test]
fn criterion_09_freiman_suite() {
    check(9);
}

#[test]
fn criterion_10_rotational_colorings() {
    check(10);
}

#[test]
fn criterion_11_clique_oracle() {
    check(11);
}

#[test]
fn criterion_12_entangled_graph() {
    check(12);
}
