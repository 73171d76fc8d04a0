//! One time-series record per sample, serialized by hand with `{}` float
//! formatting so identical runs produce byte-identical CSV.

use serde::Serialize;

use crate::monitor::AuditReport;

#[derive(Debug, Clone, Serialize)]
pub struct SampleRow {
    pub t: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub psi: f64,
    pub radius: f64,
    pub continuation_ok: bool,
    pub theta_fit_c0: f64,
    pub psi_fit_c1: f64,
    pub e_weighted: f64,
    pub dissipation: f64,
    pub div_max: f64,
    pub zero_h_mode_energy: f64,
}

impl SampleRow {
    pub const HEADER: &'static str = "t,theta,theta_dot,psi,radius,continuation_ok,\
theta_fit_C0,psi_fit_C1,E_weighted,dissipation,div_max,zero_h_mode_energy";

    pub fn from_audit(
        report: &AuditReport,
        e_weighted: f64,
        dissipation: f64,
        div_max: f64,
    ) -> Self {
        SampleRow {
            t: report.t,
            theta: report.theta,
            theta_dot: report.theta_dot,
            psi: report.psi,
            radius: report.radius,
            continuation_ok: report.continuation_ok,
            theta_fit_c0: report.theta_fit_c0,
            psi_fit_c1: report.psi_fit_c1,
            e_weighted,
            dissipation,
            div_max,
            zero_h_mode_energy: report.zero_h_mode_energy,
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.t,
            self.theta,
            self.theta_dot,
            self.psi,
            self.radius,
            self.continuation_ok,
            self.theta_fit_c0,
            self.psi_fit_c1,
            self.e_weighted,
            self.dissipation,
            self.div_max,
            self.zero_h_mode_energy
        )
    }
}
