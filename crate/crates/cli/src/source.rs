use branched::lift::{PolynomialPath, SampledPath};
use branched::poly::Poly;
use branched::scalar::parse_rational;

use crate::args::{Preset, SourceArgs};
use crate::CliError;

pub enum Source {
    Polynomial(PolynomialPath),
    Sampled(SampledPath),
}

fn plane() -> PolynomialPath {
    PolynomialPath::new(vec![Poly::from_integers(&[0, 1]), Poly::from_integers(&[0, 0, 1])])
        .expect("two non-empty components")
}

/// `0,1;0,0,1` is `(t, t²)`.
pub fn parse_poly(text: &str) -> Result<PolynomialPath, CliError> {
    let mut components = Vec::new();
    for part in text.split(';') {
        let coeffs = part
            .split(',')
            .map(|c| parse_rational(c).ok_or_else(|| CliError::Config(format!("bad coefficient `{c}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        components.push(Poly::new(coeffs));
    }
    PolynomialPath::new(components).map_err(|e| CliError::Config(e.to_string()))
}

impl Source {
    /// `gamma` is only used for sampled data.
    pub fn load(args: &SourceArgs, gamma: f64) -> Result<Source, CliError> {
        let chosen = [args.preset.is_some(), args.poly.is_some(), args.csv.is_some()];
        if chosen.iter().filter(|&&c| c).count() != 1 {
            return Err(CliError::Config("choose exactly one of --preset, --poly, --csv".into()));
        }
        if let Some(text) = &args.poly {
            return Ok(Source::Polynomial(parse_poly(text)?));
        }
        if let Some(path) = &args.csv {
            let data = SampledPath::from_csv_path(path, gamma)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            return Ok(Source::Sampled(data));
        }
        match args.preset.expect("checked above") {
            Preset::Identity => Ok(Source::Polynomial(PolynomialPath::identity())),
            Preset::Plane => Ok(Source::Polynomial(plane())),
            Preset::Weierstrass => SampledPath::weierstrass(args.samples, gamma, args.base, args.terms)
                .map(Source::Sampled)
                .map_err(|e| CliError::Config(e.to_string())),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Source::Polynomial(p) => {
                let parts: Vec<String> = p.components().iter().map(ToString::to_string).collect();
                format!("polynomial ({})", parts.join(", "))
            }
            Source::Sampled(p) => format!("{} samples in dimension {}", p.times().len(), p.dim()),
        }
    }
}
