//! Textual state descriptions.
//!
//! ```text
//! family=phi1 alpha=0.6 beta=0.8
//! family=mixed b=0.02 c=0.2
//! a00=0.6 a11=0+0.8i
//! ```
//!
//! Tokens are separated by whitespace. Amplitude keys are `a<i><j>` with
//! qubit level `i ∈ {0,1}` and qutrit level `j ∈ {0,1,2}`; missing
//! amplitudes are zero.

use std::collections::BTreeMap;
use std::fmt;

use esd_core::family::StateFamily;
use esd_core::state::{DensityMatrix, PureState};
use num_complex::Complex64;

/// How far from unit norm an input may be before it is rejected; accepted
/// inputs are renormalized.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub token: String,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid state token `{}`: {}", self.token, self.reason)
    }
}

impl std::error::Error for ParseError {}

fn err(token: &str, reason: impl Into<String>) -> ParseError {
    ParseError {
        token: token.to_string(),
        reason: reason.into(),
    }
}

/// A parsed state: a named family or an explicit state vector.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Family(StateFamily),
    Amplitudes(PureState),
}

impl StateSpec {
    pub fn family(&self) -> StateFamily {
        match self {
            StateSpec::Family(f) => *f,
            StateSpec::Amplitudes(psi) => StateFamily::Custom(DensityMatrix::from_pure(psi)),
        }
    }

    pub fn initial_state(&self) -> DensityMatrix {
        self.family().initial_state()
    }
}

impl std::str::FromStr for StateSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_state(s)
    }
}

pub fn parse_state(text: &str) -> Result<StateSpec, ParseError> {
    let mut fields: BTreeMap<&str, (&str, &str)> = BTreeMap::new();
    for token in text.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| err(token, "expected key=value"))?;
        if value.is_empty() {
            return Err(err(token, "missing value"));
        }
        if fields.insert(key, (token, value)).is_some() {
            return Err(err(token, "duplicate key"));
        }
    }
    if fields.is_empty() {
        return Err(err(text, "empty state description"));
    }
    match fields.remove("family") {
        Some((token, tag)) => parse_family(token, tag, fields),
        None => parse_amplitudes(fields),
    }
}

fn parse_real(token: &str, value: &str) -> Result<f64, ParseError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(err(token, "not a finite number")),
    }
}

fn take_real(
    fields: &mut BTreeMap<&str, (&str, &str)>,
    key: &str,
    context: &str,
) -> Result<f64, ParseError> {
    let (token, value) = fields
        .remove(key)
        .ok_or_else(|| err(context, format!("missing `{key}=`")))?;
    parse_real(token, value)
}

fn parse_family(
    family_token: &str,
    tag: &str,
    mut fields: BTreeMap<&str, (&str, &str)>,
) -> Result<StateSpec, ParseError> {
    let family = if tag == "mixed" {
        let b = take_real(&mut fields, "b", family_token)?;
        let c = take_real(&mut fields, "c", family_token)?;
        StateFamily::mixed(b, c).map_err(|e| err(family_token, e.to_string()))?
    } else {
        let build: fn(f64, f64) -> esd_core::Result<StateFamily> = match tag {
            "phi1" => StateFamily::phi1,
            "phi2plus" => StateFamily::phi2_plus,
            "phi2minus" => StateFamily::phi2_minus,
            "phi2prime" => StateFamily::phi2_prime,
            "phi3plus" => StateFamily::phi3_plus,
            "phi3minus" => StateFamily::phi3_minus,
            _ => return Err(err(family_token, "unknown family")),
        };
        let alpha = take_real(&mut fields, "alpha", family_token)?;
        let beta = take_real(&mut fields, "beta", family_token)?;
        let norm2 = alpha * alpha + beta * beta;
        if (norm2 - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return Err(err(
                family_token,
                format!("alpha² + beta² = {norm2} is not 1"),
            ));
        }
        let n = norm2.sqrt();
        build(alpha / n, beta / n).map_err(|e| err(family_token, e.to_string()))?
    };
    if let Some((_, (token, _))) = fields.into_iter().next() {
        return Err(err(token, format!("unexpected key for family `{tag}`")));
    }
    Ok(StateSpec::Family(family))
}

fn amplitude_index(key: &str) -> Option<usize> {
    let b = key.as_bytes();
    if b.len() != 3 || b[0] != b'a' {
        return None;
    }
    let (i, j) = (b[1].wrapping_sub(b'0'), b[2].wrapping_sub(b'0'));
    (i <= 1 && j <= 2).then_some(3 * i as usize + j as usize)
}

/// `<re>`, `<re>+<im>i` or `<re>-<im>i`.
pub fn parse_complex(value: &str) -> Option<Complex64> {
    let finite = |x: f64| x.is_finite().then_some(x);
    let Some(body) = value.strip_suffix('i') else {
        return finite(value.parse().ok()?).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re = finite(body[..split].parse().ok()?)?;
    let im_text = &body[split + 1..];
    if im_text.starts_with(['+', '-']) {
        return None;
    }
    let im = finite(im_text.parse().ok()?)?;
    Some(Complex64::new(re, if bytes[split] == b'-' { -im } else { im }))
}

fn parse_amplitudes(fields: BTreeMap<&str, (&str, &str)>) -> Result<StateSpec, ParseError> {
    let mut amps = [Complex64::new(0.0, 0.0); 6];
    let mut first_token = "";
    for (key, (token, value)) in fields {
        if first_token.is_empty() {
            first_token = token;
        }
        let idx = amplitude_index(key).ok_or_else(|| err(token, "unknown key"))?;
        amps[idx] = parse_complex(value).ok_or_else(|| err(token, "malformed complex number"))?;
    }
    let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > INPUT_NORM_TOLERANCE {
        return Err(err(
            first_token,
            format!("squared norm {norm2} differs from 1 by more than {INPUT_NORM_TOLERANCE:e}"),
        ));
    }
    PureState::normalized(amps)
        .map(StateSpec::Amplitudes)
        .map_err(|e| err(first_token, e.to_string()))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Amplitude form listing the nonzero amplitudes with shortest round-trip
/// precision.
pub fn format_amplitudes(psi: &PureState) -> String {
    let mut parts = Vec::new();
    for i in 0..2 {
        for j in 0..3 {
            let z = psi.amp(i, j);
            if z != Complex64::new(0.0, 0.0) {
                parts.push(format!("a{i}{j}={}", fmt_complex(z)));
            }
        }
    }
    parts.join(" ")
}
