//! Exact left and right division, including a failure.
//!
//! ```bash
//! cargo run -p qcluster --example exact_division
//! ```

use qcluster::{Error, IntMatrix, QuantumTorus, Result};

pub fn run() -> Result<()> {
    let torus = QuantumTorus::new(IntMatrix::from_rows(&[[0, 1], [-1, 0]])?)?;
    let x1 = torus.generator(0);
    let x2 = torus.generator(1);
    let a = x1.checked_add(&torus.one())?;
    let c = x2.checked_add(&x1.pow(2))?;

    let left = a.checked_mul(&c)?;
    let right = c.checked_mul(&a)?;
    println!("A = {a}, C = {c}");
    println!("A·C = {left}");
    println!("A \\ (A·C) = {}", a.divide_left_exact(&left)?);
    println!("(C·A) / A = {}", a.divide_right_exact(&right)?);

    let off = left.checked_add(&x2)?;
    match a.divide_left_exact(&off) {
        Err(Error::NotDivisible) => println!("A·C + X2 is not a multiple of A"),
        other => panic!("unexpected {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
