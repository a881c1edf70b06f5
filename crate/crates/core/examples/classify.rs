use nkconf::{classify_orientability, EnumerateOptions, SolverOptions, Symmetry};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (n, k): (usize, usize) = (args[0].parse().unwrap(), args[1].parse().unwrap());
    let symmetry =
        if args.get(2).map(String::as_str) == Some("neg") { Symmetry::Negation } else { Symmetry::Reorientation };
    let opts = SolverOptions { budget: 50_000_000, symmetry, ..Default::default() };
    let (census, summary) = classify_orientability(n, k, opts, &EnumerateOptions::default()).unwrap();
    let mut max_nodes = 0;
    for e in &census {
        max_nodes = max_nodes.max(e.orientability.as_ref().unwrap().stats.nodes);
    }
    println!("{n}_{k}: {summary:?} max_nodes={max_nodes}");
}
