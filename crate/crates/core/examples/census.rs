use std::time::Instant;

use nkconf::{enumerate_configurations, EnumerateOptions};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (n, k) = (args[0], args[1]);
    let t = Instant::now();
    let census = enumerate_configurations(n, k, &EnumerateOptions { allow_large: true, ..Default::default() })
        .expect("enumeration");
    println!("{n}_{k}: {} classes in {:.2?}", census.len(), t.elapsed());
}
