use std::sync::Arc;

use nonarch::series::{SeriesKind, TateSeries};
use nonarch::square_zero::{MonomialIdeal, Quotient, SquareZeroElem};
use nonarch::{FieldSpec, RadiusContext, RadiusDecl};

fn main() -> nonarch::Result<()> {
    let q3 = FieldSpec::padic(3, 30)?;
    let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::default_irrational("r")])?);
    let s = |kind, src: &str| TateSeries::parse_univariate(&q3, &ctx, "r", kind, src);

    let x = SquareZeroElem::dual(s(SeriesKind::Laurent, "T")?, s(SeriesKind::Laurent, "1")?);
    let y = SquareZeroElem::dual(s(SeriesKind::Laurent, "1 + 3*T")?, s(SeriesKind::Laurent, "T^-1")?);
    let xy = x.mul(&y)?;
    println!("x = {x}\ny = {y}\nxy = {xy}");
    println!("|x| = {}, |y| = {}, |xy| = {}", x.norm()?, y.norm()?, xy.norm()?);
    let e = x.epsilon();
    println!("e^2 = {}", e.mul(&e)?);

    let j: Arc<dyn Quotient<TateSeries>> = Arc::new(MonomialIdeal { degree: 3 });
    let z = SquareZeroElem::new(s(SeriesKind::Power, "1 + T")?, s(SeriesKind::Power, "T + T^4")?, j)?;
    println!("{}: z = {z}, z^2 = {}", z.quotient_description(), z.mul(&z)?);
    Ok(())
}
