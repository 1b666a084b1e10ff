//! Capped 3-adic arithmetic and norms.
use nonarch::{Bounded, FieldSpec, Scalar};

fn main() -> nonarch::Result<()> {
    let q3 = FieldSpec::padic(3, 20)?;
    let a = Scalar::parse(&q3, "13/4")?;
    let b = Scalar::from_int(&q3, 18);
    println!("a = {a}, |a| = {}", a.norm());
    println!("b = {b}, |b| = {}", b.norm());
    println!("a * b = {}, |a b| = {}", a.mul(&b)?, a.mul(&b)?.norm());
    println!("1/b = {}", b.inv()?);

    // sqrt(7) is not rational, so only 20 digits of it are kept
    let r = Scalar::from_int(&q3, 7).pth_root(2)?;
    println!("sqrt(7) = {r}");
    match r.pow(2)?.checked_sub(&Scalar::from_int(&q3, 7))? {
        Bounded::Value(d) => println!("sqrt(7)^2 - 7 = {d}"),
        Bounded::Negligible(n) => println!("sqrt(7)^2 - 7 vanishes to precision, |.| <= {n}"),
    }
    Ok(())
}
