//! Round trip through a gzipped LIBSVM file, then train on it.

use std::fs::File;
use std::io::Write;
use std::sync::Arc;

use flate2::write::GzEncoder;
use flate2::Compression;
use ues::bench::random_classification;
use ues::problems::{estimate_sigma_max, ErmSpec, Loss};
use ues::solvers::asuesa;
use ues::{load_libsvm, write_libsvm, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join("ues-example.libsvm.gz");
    let original = random_classification(120, 15, 5)?;
    let mut text = Vec::new();
    write_libsvm(&original, &mut text)?;
    let mut gz = GzEncoder::new(File::create(&path)?, Compression::default());
    gz.write_all(&text)?;
    gz.finish()?;

    let data = load_libsvm(&path, None)?;
    println!("{}: {} rows, {} columns, {} nonzeros", path.display(), data.rows(), data.cols(), data.nnz());
    assert_eq!(data.values(), original.values());

    let sigma = estimate_sigma_max(&data, 1e-10, 1000, 0)?;
    println!("sigma_max(A) = {sigma:.6}");

    let obj = ErmSpec::new(Loss::SquaredHinge, 1e-2, Arc::new(data)).build()?;
    let (sol, _) = asuesa(&obj, &vec![0.0; obj.dim()], &SolverConfig::default())?;
    println!("squared hinge: F = {:.6} in {} iterations", sol.f_val, sol.iterations);
    std::fs::remove_file(path)?;
    Ok(())
}
