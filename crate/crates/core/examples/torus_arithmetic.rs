//! Products, the bar involution and quasi-commutation in a rank-2 quantum torus.
//!
//! ```bash
//! cargo run -p qcluster --example torus_arithmetic
//! ```

use qcluster::{ExponentVector, IntMatrix, QuantumTorus, Result, VPoly};

pub fn run() -> Result<()> {
    // X1 X2 = q^{-2} X2 X1
    let torus = QuantumTorus::new(IntMatrix::from_rows(&[[0, -2], [2, 0]])?)?;
    let x1 = torus.generator(0);
    let x2 = torus.generator(1);

    let p = x1.checked_mul(&x2)?;
    let r = x2.checked_mul(&x1)?;
    println!("X1·X2 = {p}");
    println!("X2·X1 = {r}");
    println!("X1 X2 = q^{} X2 X1", x1.qcommute(&x2)?.expect("generators quasi-commute"));

    // normalized basis elements are bar-invariant, twisted ones are not
    let twisted = torus.term(ExponentVector::new(vec![1, 1]), VPoly::v_power(1))?;
    println!("bar({twisted}) = {}", twisted.bar());
    assert!(p.bar() == r && !twisted.is_bar_invariant());

    let sum = x1.checked_add(&x2)?;
    let square = sum.pow(2);
    println!("(X1 + X2)^2 = {square}");
    println!("           = {}", square.to_ordered_string());
    assert!(square.is_bar_invariant());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
