use std::sync::Arc;

use nonarch::deriv::{nonintegral_certificate, sparse_series};
use nonarch::series::{SeriesKind, TateSeries};
use nonarch::{FieldSpec, RadiusContext, RadiusDecl};

fn main() -> nonarch::Result<()> {
    let q3 = FieldSpec::padic(3, 30)?;
    let ctx = Arc::new(RadiusContext::new(3, vec![RadiusDecl::near_six_tenths("r1")])?);

    let sparse = sparse_series(3, &q3, &ctx, "r1")?;
    println!("F = {}", sparse.ideal);
    let cert = nonintegral_certificate(&sparse.ideal, 2, 3)?;
    println!("verdict {:?}", cert.verdict);
    println!("{}", serde_json::to_string_pretty(&cert.witness).unwrap());

    // a polynomial satisfies a relation of degree one
    let f = TateSeries::parse_univariate(&q3, &ctx, "r1", SeriesKind::Power, "1 + T^2")?;
    let cert = nonintegral_certificate(&f, 2, 3)?;
    println!("1 + T^2: {:?}, relation {}", cert.verdict, cert.witness["relation"]["relation"]);
    Ok(())
}
