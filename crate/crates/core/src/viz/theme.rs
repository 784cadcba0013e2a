use crate::error::{HceError, Result};

/// 8-bit RGB color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    /// Relative luminance (sRGB, linearized).
    pub fn luminance(&self) -> f64 {
        let lin = |c: u8| {
            let c = c as f64 / 255.0;
            if c <= 0.04045 {
                c / 12.92
            } else {
                ((c + 0.055) / 1.055).powf(2.4)
            }
        };
        0.2126 * lin(self.0) + 0.7152 * lin(self.1) + 0.0722 * lin(self.2)
    }

    pub fn lerp(a: Rgb, b: Rgb, t: f64) -> Rgb {
        let t = t.clamp(0.0, 1.0);
        let mix = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * t).round() as u8;
        Rgb(mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Margins {
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub left: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotTheme {
    pub name: String,
    pub active: Rgb,
    pub active_light: Rgb,
    pub control: Rgb,
    pub control_light: Rgb,
    pub tie: Rgb,
    /// Severity ramp endpoints: worst (dark) to best (light).
    pub ramp_dark: Rgb,
    pub ramp_light: Rgb,
    /// Sunset ramp endpoints: no effect to strong effect.
    pub sunset_low: Rgb,
    pub sunset_high: Rgb,
    pub font_family: String,
    pub font_size: f64,
    pub margins: Margins,
}

impl Default for PlotTheme {
    fn default() -> Self {
        PlotTheme {
            name: "default".into(),
            active: Rgb(0x2e, 0x8b, 0x57),
            active_light: Rgb(0xc7, 0xe9, 0xc0),
            control: Rgb(0xc0, 0x39, 0x2b),
            control_light: Rgb(0xf8, 0xc8, 0xd0),
            tie: Rgb(0xbd, 0xbd, 0xbd),
            ramp_dark: Rgb(0x3b, 0x1f, 0x2b),
            ramp_light: Rgb(0xf2, 0xe6, 0xd0),
            sunset_low: Rgb(0x8b, 0x00, 0x00),
            sunset_high: Rgb(0x00, 0x64, 0x00),
            font_family: "Helvetica, Arial, sans-serif".into(),
            font_size: 12.0,
            margins: Margins { top: 40.0, right: 30.0, bottom: 60.0, left: 70.0 },
        }
    }
}

impl PlotTheme {
    /// Blue/orange arms and a single-hue ramp, distinguishable under the common color vision deficiencies.
    pub fn colorblind() -> Self {
        PlotTheme {
            name: "colorblind".into(),
            active: Rgb(0x00, 0x72, 0xb2),
            active_light: Rgb(0xa6, 0xd1, 0xee),
            control: Rgb(0xd5, 0x5e, 0x00),
            control_light: Rgb(0xf6, 0xc9, 0xa0),
            tie: Rgb(0xbb, 0xbb, 0xbb),
            ramp_dark: Rgb(0x08, 0x1d, 0x58),
            ramp_light: Rgb(0xed, 0xf8, 0xb1),
            sunset_low: Rgb(0xd5, 0x5e, 0x00),
            sunset_high: Rgb(0x00, 0x72, 0xb2),
            ..PlotTheme::default()
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "" | "default" => Ok(PlotTheme::default()),
            "colorblind" => Ok(PlotTheme::colorblind()),
            other => Err(HceError::invalid(format!("unknown theme '{other}' (expected default or colorblind)"))),
        }
    }

    /// `k` colors from the most unfavorable (darkest) to the most favorable.
    pub fn severity_ramp(&self, k: usize) -> Vec<Rgb> {
        match k {
            0 => vec![],
            1 => vec![Rgb::lerp(self.ramp_dark, self.ramp_light, 0.5)],
            _ => (0..k).map(|i| Rgb::lerp(self.ramp_dark, self.ramp_light, i as f64 / (k - 1) as f64)).collect(),
        }
    }

    /// Color for a win-odds value, clamped to `[lo, hi]` before interpolation.
    pub fn sunset_color(&self, value: f64, lo: f64, hi: f64) -> Rgb {
        let t = if hi > lo { (value - lo) / (hi - lo) } else { 0.5 };
        // pass through a pale midpoint so mid-range bands stay readable
        let mid = Rgb(0xf7, 0xf0, 0xc8);
        if t < 0.5 {
            Rgb::lerp(self.sunset_low, mid, t * 2.0)
        } else {
            Rgb::lerp(mid, self.sunset_high, (t - 0.5) * 2.0)
        }
    }
}
