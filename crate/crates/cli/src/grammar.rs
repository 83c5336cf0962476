//! Small value grammars used by the flags.

use quasifree::ModelSpec;

/// `"a:b"`, `"a:b:step"` or a comma list.
pub fn lengths(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("invalid length list `{s}`");
    let v: Vec<usize> = if s.contains(':') {
        let parts: Vec<usize> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [a, b] => (*a..=*b).collect(),
            [a, b, step] if *step > 0 => (*a..=*b).step_by(*step).collect(),
            _ => return Err(bad()),
        }
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if v.is_empty() || v.contains(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("`{s}` must list positive, strictly increasing lengths"));
    }
    Ok(v)
}

pub fn floats(s: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid number `{p}`")))
        .collect::<Result<_, _>>()?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("`{s}` contains a non-finite value"));
    }
    Ok(v)
}

/// `name=v1,v2,...`
pub fn param_list(s: &str) -> Result<(String, Vec<f64>), String> {
    let (name, values) = s.split_once('=').ok_or_else(|| format!("expected `name=v1,v2,...`, got `{s}`"))?;
    Ok((name.trim().to_string(), floats(values)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnParams {
    pub gamma: f64,
    pub h: f64,
    pub d: f64,
}

impl NnParams {
    pub fn model(&self) -> quasifree::Result<ModelSpec> {
        ModelSpec::nearest_neighbor(self.gamma, self.h, self.d)
    }

    pub fn with(&self, name: &str, v: f64) -> Result<Self, String> {
        let mut p = *self;
        match name {
            "gamma" => p.gamma = v,
            "h" => p.h = v,
            "D" => p.d = v,
            _ => return Err(format!("unknown nearest-neighbour parameter `{name}`")),
        }
        Ok(p)
    }
}

/// `gamma=1,h=1,D=2`; missing keys default to `gamma = 1`, `h = 0`, `D = 0`.
pub fn nn(s: &str) -> Result<NnParams, String> {
    let mut p = NnParams { gamma: 1.0, h: 0.0, d: 0.0 };
    for kv in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected key=value in `{kv}`"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("invalid number in `{kv}`"))?;
        if !v.is_finite() {
            return Err(format!("non-finite value in `{kv}`"));
        }
        p = p.with(k.trim(), v)?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammars() {
        assert_eq!(lengths("2:10:4").unwrap(), vec![2, 6, 10]);
        assert_eq!(lengths("3,5").unwrap(), vec![3, 5]);
        assert!(lengths("5,3").is_err());
        assert!(lengths("0:4").is_err());
        let (n, v) = param_list("h=0.9, 0.95").unwrap();
        assert_eq!((n.as_str(), v), ("h", vec![0.9, 0.95]));
        let p = nn("gamma=0.5,D=2").unwrap();
        assert_eq!(p, NnParams { gamma: 0.5, h: 0.0, d: 2.0 });
        assert!(nn("g=1").is_err());
    }
}
