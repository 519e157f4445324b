//! Drives the command-line front end in-process and prints the reports it
//! writes, with their exit codes.

use bannai_ito::cli::run;

fn main() {
    let runs: [&[&str]; 5] = [
        &["bi", "eval", "--def", "2", "--n1", "2", "--n2", "1", "--z1", "3/7", "--z2", "-2/9"],
        &["bi", "table", "uni", "--N", "3", "--format", "csv"],
        &["bi", "verify", "l2", "--max-deg", "3", "--seed", "7"],
        &["bi", "qlimit", "operator", "--max-deg", "0", "--format", "csv"],
        &["bi", "qlimit", "poly", "--t", "1e-3"],
    ];
    for args in runs {
        println!("$ {}", args.join(" "));
        let code = run(args.iter().copied());
        println!("exit {code}\n");
    }
}
