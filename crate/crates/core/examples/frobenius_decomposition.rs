//! Splitting elements of F_4((t)) and of F_4((t))<T/r> into p-th powers
//! against the basis 1, t.
use std::sync::Arc;

use nonarch::frobenius::{
    parts_to_json, reconstruct_scalar, scalar_decompose, series_decompose, verify_norm_bound, PBasis,
};
use nonarch::series::{SeriesKind, TateSeries};
use nonarch::{FieldSpec, LogNorm, RadiusContext, RadiusDecl, Scalar};

fn main() -> nonarch::Result<()> {
    let f4t = FieldSpec::fq_laurent(2, 4, 30)?;
    let basis = PBasis::new(&f4t)?;

    let a = Scalar::parse(&f4t, "t^-3 + t + t^4")?;
    let parts = scalar_decompose(&a, &basis)?;
    for (x, y) in basis.elements().iter().zip(&parts) {
        println!("{x}: ({y})^2");
    }
    println!("reconstructed = {}", reconstruct_scalar(&parts, &basis)?);
    let check = verify_norm_bound(&a, &basis, &LogNorm::one())?;
    println!("max |a_i^p x_i| / |a| = {} (pass {})", check.ratio, check.pass);

    let ctx = Arc::new(RadiusContext::new(2, vec![RadiusDecl::default_irrational("r")])?);
    let f = TateSeries::parse_univariate(&f4t, &ctx, "r", SeriesKind::Power, "t*T + T^2 + T^3")?;
    let parts = series_decompose(&f, &basis)?;
    println!("{}", serde_json::to_string_pretty(&parts_to_json(&parts)?).unwrap());
    Ok(())
}
