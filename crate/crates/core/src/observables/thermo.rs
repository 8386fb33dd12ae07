use crate::traversal::Energies;

/// Instantaneous thermodynamic state after one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoSample {
    pub step: u64,
    pub e2_per_n: f64,
    pub e3_per_n: f64,
    pub ekin_per_n: f64,
    pub temperature: f64,
    pub pressure: f64,
    pub w2: f64,
    pub w3: f64,
}

impl ThermoSample {
    /// `p_tail` is added to the pressure; energies are reported without tail.
    pub fn new(step: u64, n: usize, volume: f64, energies: &Energies, kinetic: f64, p_tail: f64) -> Self {
        let nf = n.max(1) as f64;
        let temperature = if n == 0 { 0.0 } else { 2.0 * kinetic / (3.0 * nf) };
        ThermoSample {
            step,
            e2_per_n: energies.e2 / nf,
            e3_per_n: energies.e3 / nf,
            ekin_per_n: kinetic / nf,
            temperature,
            pressure: pressure(n, volume, temperature, energies.w2, energies.w3, p_tail),
            w2: energies.w2,
            w3: energies.w3,
        }
    }

    pub const CSV_HEADER: &'static str = "step,E2/N,E3/N,Ekin/N,T,P,W2,W3";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.step, self.e2_per_n, self.e3_per_n, self.ekin_per_n, self.temperature, self.pressure, self.w2, self.w3
        )
    }
}

/// Virial pressure `rho T + (W2 + W3) / (3V) + p_tail`.
pub fn pressure(n: usize, volume: f64, temperature: f64, w2: f64, w3: f64, p_tail: f64) -> f64 {
    n as f64 / volume * temperature + (w2 + w3) / (3.0 * volume) + p_tail
}

/// Production means.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoAverages {
    pub samples: u64,
    /// `<E2>/N + <E3>/N + E_tail/N`.
    pub energy_per_n: f64,
    pub e2_per_n: f64,
    pub e3_per_n: f64,
    pub pressure: f64,
    pub temperature: f64,
    pub w2: f64,
    pub w3: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ThermoAccumulator {
    samples: u64,
    e2: f64,
    e3: f64,
    p: f64,
    t: f64,
    w2: f64,
    w3: f64,
}

impl ThermoAccumulator {
    pub fn add(&mut self, s: &ThermoSample) {
        self.samples += 1;
        self.e2 += s.e2_per_n;
        self.e3 += s.e3_per_n;
        self.p += s.pressure;
        self.t += s.temperature;
        self.w2 += s.w2;
        self.w3 += s.w3;
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Means, or `None` when nothing was sampled.
    pub fn finish(&self, e_tail_per_n: f64) -> Option<ThermoAverages> {
        if self.samples == 0 {
            return None;
        }
        let k = self.samples as f64;
        Some(ThermoAverages {
            samples: self.samples,
            energy_per_n: self.e2 / k + self.e3 / k + e_tail_per_n,
            e2_per_n: self.e2 / k,
            e3_per_n: self.e3 / k,
            pressure: self.p / k,
            temperature: self.t / k,
            w2: self.w2 / k,
            w3: self.w3 / k,
        })
    }
}
