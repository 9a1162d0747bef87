//! Drives the command line front end in process: a few commands against
//! built-in data, printing the exit code and the JSON report of each.

use equihf::cli::run_with;

fn main() {
    let runs: [&[&str]; 4] = [
        &["--json", "floer-localize", "builtin:annulus"],
        &["--json", "cz-krein", "--blocks", "i-:a=-0.5"],
        &["--json", "faces", "--i", "2", "--sigma", "+"],
        &["blocks", "--n", "2"],
    ];
    for args in runs {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let out = run_with(&args, &|| Ok(String::new()));
        println!("$ equihf {}  (exit {})", args.join(" "), out.code);
        print!("{}", out.stdout);
        println!();
    }
}
