//! Runs A1-A8 and prints one PASS/FAIL line per criterion.
//!
//! Criterion ids given as arguments (`-- A1 A8`) restrict the run; A6 then
//! covers only the configurations of the selected criteria.

use std::path::Path;
use std::time::Instant;

use btfloquet_acceptance::{Criterion, Session};

fn report(c: &Criterion) {
    println!("{}", c.line());
    for d in c.details() {
        println!("{d}");
    }
}

fn main() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut s = Session::new(&configs);
    let start = Instant::now();
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: &str| only.is_empty() || only.iter().any(|a| a.eq_ignore_ascii_case(id));

    // cheap criteria first; A5 reads the g = 1000 branch of A3 and A6
    // summarizes everything before it
    let mut done = Vec::new();
    type Run = fn(&mut Session) -> Criterion;
    let order: [(&str, Run); 7] = [
        ("A1", Session::a1),
        ("A2", Session::a2),
        ("A8", Session::a8),
        ("A4", Session::a4),
        ("A7", Session::a7),
        ("A3", Session::a3),
        ("A5", Session::a5),
    ];
    for (id, run) in order {
        if !wanted(id) {
            continue;
        }
        let c = run(&mut s);
        report(&c);
        done.push(c);
    }
    if wanted("A6") {
        let a6 = s.a6();
        report(&a6);
        done.push(a6);
    }

    done.sort_by_key(|c| c.id);
    println!();
    println!("acceptance summary ({:.0} s):", start.elapsed().as_secs_f64());
    for c in &done {
        println!("{}", c.line());
    }
    let passed = done.iter().filter(|c| c.passed()).count();
    println!("{passed}/{} criteria passed", done.len());
    if passed != done.len() {
        std::process::exit(1);
    }
}
