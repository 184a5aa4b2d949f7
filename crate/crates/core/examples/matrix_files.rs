//! Writing and reading the JSON matrix format used by the `qle` binary.
//!
//! Run with `cargo run --example matrix_files`.

use logical_entropy::io::{MatrixFile, MatrixKind, PvmFile};
use logical_entropy::sampling::{sample_density, sample_unitary};

fn main() -> logical_entropy::Result<()> {
    let rho = sample_density(3, 4, None)?.with_dims(vec![2, 2])?;
    let text = MatrixFile::from_density(&rho).to_json();
    let back = MatrixFile::parse(&text).expect("own output parses").density()?;
    println!("density round trip exact: {}", back == rho);

    let basis = MatrixFile::from_matrix(&sample_unitary(3, 2)?, MatrixKind::Unitary, None).to_json();
    let pvm = PvmFile::parse(&basis).expect("own output parses").pvm()?;
    println!("basis file gives {} rank-one projectors", pvm.len());
    println!("{}", MatrixFile::from_density(&sample_density(1, 2, Some(1))?).to_json());
    Ok(())
}
