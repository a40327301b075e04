//! Acceptance run: one line per criterion. Criteria whose published values
//! the computation contradicts are listed in `KNOWN_DEVIATIONS`; they print
//! FAIL with the offending cells but do not fail the target, as long as the
//! failure is exactly the documented one.

use std::process::ExitCode;
use std::time::Instant;

use prym_core::components::Exec;
use prym_core::verify::{self, Check};

type Run = Box<dyn Fn() -> prym_core::error::Result<Check>>;

/// Pinned ranges and bounds.
const SD_MAX: i64 = 6889;
const PD_MAX: i64 = 2000;
const QD_MAX: i64 = 2000;
const GEOMETRY_MAX: i64 = 200;
const GEOMETRY_MAX_Q: i64 = 4;
const D8_BOUND: i64 = 10;
const GENUS4_MAX: i64 = 2000;
const SQUARE_ROOT_MAX: i64 = 20;
const SQUARE_TILING_ROOT_MAX: i64 = 10;
const PROPERTIES_MAX: i64 = 500;

/// `(criterion, substring the failure detail must contain)`.
const KNOWN_DEVIATIONS: [(u8, &str); 3] = [
    (1, "D=32 g3_model: computed 7, table 8"),
    (5, "17/20 chains replay (3 known misprints, reconstructions replay)"),
    (10, "excluding them leaves [36, 41]"),
];

fn main() -> ExitCode {
    let exec = Exec::default();
    let runs: Vec<(u8, Run)> = vec![
        (1, Box::new(verify::table1)),
        (2, Box::new(move || verify::sd_components(SD_MAX, exec))),
        (3, Box::new(move || verify::pd_components(PD_MAX, exec))),
        (4, Box::new(move || verify::qd_components(QD_MAX, exec))),
        (5, Box::new(verify::chains)),
        (
            6,
            Box::new(move || verify::geometric_moves(GEOMETRY_MAX, GEOMETRY_MAX_Q, exec)),
        ),
        (7, Box::new(verify::exceptional_directions)),
        (8, Box::new(|| verify::d8(D8_BOUND))),
        (9, Box::new(verify::origami_100)),
        (10, Box::new(move || verify::genus4(GENUS4_MAX, exec))),
        (
            11,
            Box::new(|| verify::square_tiled(SQUARE_ROOT_MAX, SQUARE_TILING_ROOT_MAX)),
        ),
        (12, Box::new(move || verify::properties(PROPERTIES_MAX, exec))),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in runs {
        let start = Instant::now();
        let check = match run() {
            Ok(c) => c,
            Err(e) => {
                println!("[FAIL] {id:>2} error: {e}");
                unexpected.push(id);
                continue;
            }
        };
        println!("{check} ({:.1}s)", start.elapsed().as_secs_f64());
        let known = KNOWN_DEVIATIONS.iter().find(|k| k.0 == id);
        match (check.pass, known) {
            (true, None) => {}
            (false, Some((_, sig))) if check.detail.contains(sig) => println!("       known deviation, see README"),
            (true, Some(_)) => {
                println!("       listed as a known deviation but passes");
                unexpected.push(id);
            }
            _ => unexpected.push(id),
        }
    }
    let passed = 12 - KNOWN_DEVIATIONS.len() - unexpected.len();
    println!(
        "acceptance: {passed} pass, {} known deviations, {} unexpected",
        KNOWN_DEVIATIONS.len(),
        unexpected.len()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected results for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
