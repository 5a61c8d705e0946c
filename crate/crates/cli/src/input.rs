//! Input descriptors: inline forms, inline JSON, `@path` and `-` (stdin).

use std::io::Read;

use reeb_core::arith::integer;
use reeb_core::{
    AsymptoticData, Building, BuildingCaps, CobordismData, Ellipsoid, FeasibilityCaps, PerturbedRational, ReebOrbit,
    Setting,
};
use serde::de::DeserializeOwned;

use crate::error::CliError;

/// Source text of a descriptor, or `None` when it is an inline (non-JSON) form.
fn json_source(arg: &str) -> Result<Option<String>, CliError> {
    let arg = arg.trim();
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io { what: "stdin".into(), source })?;
        return Ok(Some(s));
    }
    if let Some(path) = arg.strip_prefix('@') {
        return std::fs::read_to_string(path).map(Some).map_err(|source| CliError::Io { what: path.into(), source });
    }
    if arg.starts_with('{') || arg.starts_with('"') {
        return Ok(Some(arg.to_string()));
    }
    Ok(None)
}

fn from_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::json(what, e))
}

fn pairs(s: &str) -> Result<Vec<(&str, &str)>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got {p:?}")))
        })
        .collect()
}

/// `a=1,b=5/2,eps=b`; values may carry their own `+ e` term.
pub fn ellipsoid(arg: &str) -> Result<Ellipsoid, CliError> {
    if let Some(text) = json_source(arg)? {
        return from_json("ellipsoid", &text);
    }
    let (mut a, mut b, mut eps) = (None, None, None);
    for (k, v) in pairs(arg)? {
        match k {
            "a" => a = Some(v.parse::<PerturbedRational>()?),
            "b" => b = Some(v.parse::<PerturbedRational>()?),
            "eps" => eps = Some(v),
            _ => return Err(CliError::Usage(format!("unknown ellipsoid key {k:?}"))),
        }
    }
    let a = a.ok_or_else(|| CliError::Usage("ellipsoid needs a=".into()))?;
    let b = b.ok_or_else(|| CliError::Usage("ellipsoid needs b=".into()))?;
    let one = PerturbedRational::plus_eps(integer(0));
    let (a, b) = match eps {
        None | Some("none") => (a, b),
        Some("a") => (&a + &one, b),
        Some("b") => (a, &b + &one),
        Some(other) => return Err(CliError::Usage(format!("eps must be a, b or none, got {other:?}"))),
    };
    Ok(Ellipsoid::new(a, b)?)
}

/// `inner:<ellipsoid>;outer:<ellipsoid>`.
pub fn cobordism(arg: &str) -> Result<CobordismData, CliError> {
    if let Some(text) = json_source(arg)? {
        return from_json("cobordism", &text);
    }
    let (mut inner, mut outer) = (None, None);
    for part in arg.split(';').filter(|p| !p.trim().is_empty()) {
        match part.trim().split_once(':') {
            Some(("inner", e)) => inner = Some(ellipsoid(e)?),
            Some(("outer", e)) => outer = Some(ellipsoid(e)?),
            _ => return Err(CliError::Usage(format!("expected inner:… or outer:…, got {part:?}"))),
        }
    }
    match (inner, outer) {
        (Some(i), Some(o)) => Ok(CobordismData::new(i, o)?),
        _ => Err(CliError::Usage("cobordism needs inner: and outer:".into())),
    }
}

/// `symplectization:<ellipsoid>`, `cobordism:<cobordism>` or a bare ellipsoid.
pub fn setting(arg: &str) -> Result<Setting, CliError> {
    if let Some(text) = json_source(arg)? {
        return from_json("setting", &text);
    }
    let arg = arg.trim();
    if let Some(rest) = arg.strip_prefix("symplectization:") {
        return Ok(Setting::Symplectization(ellipsoid(rest)?));
    }
    if let Some(rest) = arg.strip_prefix("cobordism:") {
        return Ok(Setting::Cobordism(cobordism(rest)?));
    }
    Ok(Setting::Symplectization(ellipsoid(arg)?))
}

/// `alpha,13` or `{"gen": "alpha", "mult": 13}`.
pub fn orbit(arg: &str) -> Result<ReebOrbit, CliError> {
    match json_source(arg)? {
        Some(text) => from_json("orbit", &text),
        None => Ok(arg.parse()?),
    }
}

pub fn data(arg: &str) -> Result<AsymptoticData, CliError> {
    let text = json_source(arg)?.ok_or_else(|| CliError::Usage("--data takes JSON, @path or -".into()))?;
    from_json("asymptotic data", &text)
}

pub fn building(arg: &str) -> Result<Building, CliError> {
    let text = json_source(arg)?.ok_or_else(|| CliError::Usage("--building takes JSON, @path or -".into()))?;
    from_json("building", &text)
}

fn count(k: &str, v: &str) -> Result<u64, CliError> {
    v.parse().map_err(|e| CliError::Usage(format!("cap {k}={v:?}: {e}")))
}

/// `neg=6,mult=12`.
pub fn feasibility_caps(arg: Option<&str>) -> Result<FeasibilityCaps, CliError> {
    let mut caps = FeasibilityCaps::default();
    let Some(arg) = arg else { return Ok(caps) };
    if let Some(text) = json_source(arg)? {
        return from_json("caps", &text);
    }
    for (k, v) in pairs(arg)? {
        match k {
            "neg" | "max_negative_punctures" => caps.max_negative_punctures = count(k, v)? as usize,
            "mult" | "max_total_multiplicity" => caps.max_total_multiplicity = count(k, v)?,
            _ => return Err(CliError::Usage(format!("unknown cap {k:?}"))),
        }
    }
    Ok(caps)
}

/// `levels=3,mult=12`.
pub fn building_caps(arg: Option<&str>) -> Result<BuildingCaps, CliError> {
    let mut caps = BuildingCaps::default();
    let Some(arg) = arg else { return Ok(caps) };
    if let Some(text) = json_source(arg)? {
        return from_json("caps", &text);
    }
    for (k, v) in pairs(arg)? {
        match k {
            "levels" | "max_levels_per_side" => caps.max_levels_per_side = count(k, v)? as usize,
            "mult" | "max_multiplicity" => caps.max_multiplicity = count(k, v)?,
            _ => return Err(CliError::Usage(format!("unknown cap {k:?}"))),
        }
    }
    Ok(caps)
}
