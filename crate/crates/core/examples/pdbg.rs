use hardedge::complexmath::Complex64;
use hardedge::polya::{MellinSpec, Order, PolyaTransforms};
use hardedge::quadrature::GaussLegendre;

fn kernel(n: usize, x: f64, a1: f64, a2: f64, m: usize, npu: f64, eps: f64) -> Complex64 {
    let tr = PolyaTransforms::new(MellinSpec::ginibre(0, Order::Finite(n as u32)));
    let nf = n as f64;
    let sgn = a2.signum();
    let t_max = 4.0f64;
    let panels = (2.0 * t_max * npu / 16.0).ceil() as usize;
    let gl = GaussLegendre::new(16);
    let h = 2.0 * t_max / panels as f64;
    let mut zn = vec![]; let mut zf = vec![]; let mut zp = vec![];
    for p in 0..panels {
        let lo = -t_max + p as f64 * h;
        for (xi, wi) in gl.nodes.iter().zip(&gl.weights) {
            let t = lo + 0.5 * h * (xi + 1.0);
            let z = Complex64::new(t, -sgn * eps);
            let kom = tr.komega(a2 * z).unwrap();
            zn.push(z);
            zf.push(0.5 * h * wi * kom * (-0.5 * nf * z * z - Complex64::new(0.0, nf * x) * z).exp());
            zp.push(z.powi(n as i32));
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let th = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / m as f64;
        let zpr = Complex64::new(th.cos(), th.sin());
        let zppow = zpr.powi(n as i32);
        let outer = zpr * tr.jomega(a1 * zpr) * (0.5 * nf * zpr * zpr + Complex64::new(0.0, nf * x) * zpr).exp();
        let mut inner = Complex64::new(0.0, 0.0);
        for j in 0..zn.len() {
            let diff = zpr - zn[j];
            let r = if diff.norm() > 0.1 { (1.0 - zp[j] / zppow) / diff } else {
                let q = zn[j] / zpr;
                let mut s = Complex64::new(0.0, 0.0); let mut p = Complex64::new(1.0, 0.0);
                for _ in 0..n { s += p; p *= q; }
                s / zpr
            };
            inner += zf[j] * r;
        }
        total += outer * inner;
    }
    total / (m as f64 * 2.0 * std::f64::consts::PI)
}

fn main() {
    for (m, npu, eps) in [(512usize, 400.0, 0.04), (512, 800.0, 0.04), (1024, 800.0, 0.04), (512, 1600.0, 0.04), (1024, 1600.0, 0.04), (2048, 1600.0, 0.04), (1024, 1600.0, 0.02), (512, 3200.0, 0.08), (2048, 3200.0, 0.04)] {
        let v = kernel(64, 1.0, -2.0, -2.0, m, npu, eps);
        println!("m={m:5} npu={npu:6} eps={eps}: {v:.8}");
    }
}
