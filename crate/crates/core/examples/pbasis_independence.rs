use std::sync::Arc;

use nonarch::deriv::{p_independence_certificate, pbasis_series, IndependenceBounds};
use nonarch::{FieldSpec, RadiusContext, RadiusDecl};

fn main() -> nonarch::Result<()> {
    let rf = FieldSpec::ratfun_laurent(2, 3, 30)?;
    let ctx = Arc::new(RadiusContext::new(2, vec![RadiusDecl::default_irrational("r")])?);
    let f = pbasis_series(4, &rf, &ctx, "r")?;
    println!("f = {f}");
    let cert = p_independence_certificate(&f, &IndependenceBounds::default())?;
    println!("verdict {:?}", cert.verdict);
    println!("{}", serde_json::to_string_pretty(&cert.witness).unwrap());
    Ok(())
}
