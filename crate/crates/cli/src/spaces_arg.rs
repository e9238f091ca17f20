//! Built-in space names for the command line, so the standard runs need no
//! hand-written JSON.

use steklov::{CurvatureSign, FieldKind, SpaceModel, Warp, WarpedModel};

/// Resolve a named space. Families that need a base dimension (Rn, RHn, CHn,
/// HHn) take it from `--n`; fixed names (H2, S2, CaH2, warped presets)
/// ignore it.
pub fn builtin_space(name: &str, n: Option<u32>) -> Result<SpaceModel, String> {
    let need_n = || n.ok_or_else(|| format!("space {name} needs --n <dim>"));
    match name {
        "H2" => Ok(SpaceModel::hyperbolic_plane()),
        "S2" => SpaceModel::rank_one(FieldKind::Real, 2, CurvatureSign::Compact).map_err(|e| e.to_string()),
        "CaH2" => {
            SpaceModel::rank_one(FieldKind::Cayley, 2, CurvatureSign::Noncompact).map_err(|e| e.to_string())
        }
        "Rn" => SpaceModel::euclidean(need_n()?).map_err(|e| e.to_string()),
        "RHn" => SpaceModel::rank_one(FieldKind::Real, need_n()?, CurvatureSign::Noncompact)
            .map_err(|e| e.to_string()),
        "CHn" => SpaceModel::rank_one(FieldKind::Complex, need_n()?, CurvatureSign::Noncompact)
            .map_err(|e| e.to_string()),
        "HHn" => SpaceModel::rank_one(FieldKind::Quaternion, need_n()?, CurvatureSign::Noncompact)
            .map_err(|e| e.to_string()),
        // Warped preset: psi(r) = sinh(1.2 r)/1.2, curvature -1.44 <= -1.
        "warped-sinh12" => {
            let warp = Warp::sinh_scaled(1.2).map_err(|e| e.to_string())?;
            Ok(SpaceModel::Warped(WarpedModel::new(2, warp, -1.0).map_err(|e| e.to_string())?))
        }
        other => Err(format!(
            "unknown space {other:?}; built-ins: H2, S2, CaH2, Rn, RHn, CHn, HHn (with --n), warped-sinh12"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_spaces_resolve() {
        assert!(builtin_space("H2", None).is_ok());
        assert!(builtin_space("Rn", Some(3)).is_ok());
        assert!(builtin_space("Rn", None).is_err());
        assert!(builtin_space("warped-sinh12", None).is_ok());
        assert!(builtin_space("nope", None).is_err());
    }
}
