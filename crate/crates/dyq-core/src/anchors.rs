//! Every anchor string a suite may emit.

pub const ANCHORS: &[&str] = &[
    r#"(w-z1+h)(w-z2+h)/((w-z1-h)(w-z2-h)) - 2(w-z1+h)/(w-z1-h) + 1 = 2h(z2-z1+2h)/((w-z1-h)(w-z2-h)); (w-z2+h)/(w-z2-h) - 2 = (z2-w+3h)/(w-z2-h)"#,
    r#"(x1 - x2 + mu hbar) a(x1) b(x2) = (x1 - x2 + nu hbar) b(x2) a(x1)"#,
    r#"(x_0+x_2)^lY(u,x_0+x_2)Y(v,x_2)w = (x_2+x_0)^lY(Y(u,x_0)v,x_2)w mod hbar^N"#,
    r#"(z - w)[e+_i(z), e+_j(w)] = 0 if a_ij = -1"#,
    r#"(z - w)[e-_i(z), e-_j(w)] = 0 if a_ij = -1"#,
    r#"(z-w)[e_i^pm(z),e_j^pm(w)] = 0 if a_ij = -1"#,
    r#"(z-w)^-1(z-w-mu h)a(z)a(w) = (w-z)^-1(w-z-mu h)a(w)a(z)"#,
    r#"(z-w+a h)X_i^-(z)X_j^-(w) = (z-w-a h)X_j^-(w)X_i^-(z)"#,
    r#"(z-w-2nu h)a(z)a(w) = (z-w+2nu h)a(w)a(z), (z-w+nu h)a(z)b(w) = (z-w-nu h)b(w)a(z)"#,
    r#"(z-w-a h)X_i^+(z)X_j^+(w) = (z-w+a h)X_j^+(w)X_i^+(z)"#,
    r#"(z-w-a h)x_i^+(z)x_j^+(w) = (z-w+a h)x_j^+(w)x_i^+(z)"#,
    r#"(z-w-a h)x_i^-(z)x_j^-(w) = (z-w+a h)x_j^-(w)x_i^-(z)"#,
    r#"-G(x)q^{-x} = (e^{-2 hbar x}-1)/x = -2 hbar L(-2 hbar x)"#,
    r#"2h(z2-z1+2h)b(w)a(z1)a(z2) + 2h(z1-z2+2h)b(w)a(z2)a(z1) = 0"#,
    r#"F(d_z)G(d_z) = 1"#,
    r#"G(x)q^{-l x} = 2 hbar L(-2 hbar x) q^{(1-l)x}"#,
    r#"H_i^+(z)H_j^-(w) = H_j^-(w)H_i^+(z)(z-w-a h-k h)(z-w+a h+k h)/((z-w+a h-k h)(z-w-a h+k h))"#,
    r#"H_i^+(z)X_j^+(w) = X_j^+(w)H_i^+(z)(z-w+a h+k h/2)/(z-w-a h+k h/2)"#,
    r#"H_i^+(z)X_j^-(w) = X_j^-(w)H_i^+(z)((z-w+a h-k h/2)/(z-w-a h-k h/2))^-1"#,
    r#"H_i^-(z)X_j^+(w) = X_j^+(w)H_i^-(z)(w-z-a h+k h/2)/(w-z+a h+k h/2)"#,
    r#"H_i^-(z)X_j^-(w) = X_j^-(w)H_i^-(z)((w-z-a h-k h/2)/(w-z+a h-k h/2))^-1"#,
    r#"Res_x(x-b hbar)^{-1}F(x,hbar) = F(b hbar,hbar), Sing_x (x-b hbar)^{-1}F(x,hbar) = (x-b hbar)^{-1}F(b hbar,hbar)"#,
    r#"Sing_z Y_E(a(x), z) b(x) = a(x)_0 b(x) (z + mu hbar)^-1"#,
    r#"X_i^+(z)X_j^+(w) = X_j^+(w)X_i^+(z) if a = 0"#,
    r#"X_i^-(z)X_j^-(w) = X_j^-(w)X_i^-(z) if a = 0"#,
    r#"Y(c_i, x) = exp(-G(d_x) q^{-l d_x} Y^+(h_i, x)) exp(-G(d_x) q^{-l d_x} Y^-(h_i, x))"#,
    r#"Y_E(a(x), z) 1_W = a(x + z)"#,
    r#"Y_W(E^-(-a, z) 1, x) = (1 + z/x)^{a_0} E^-(-a, x + z) E^-(a, x) E^+(-a, x + z) E^+(a, x)"#,
    r#"Y_W(E^-(-a, z) 1, x) = exp(z L(z d_x) Y^+(a, x)) exp(z L(z d_x) Y^-(a, x))"#,
    r#"[H_i^+(z),H_j^+(w)] = 0"#,
    r#"[H_i^-(z),H_j^-(w)] = 0"#,
    r#"[X_i^+(z),X_j^-(w)] = d_ij/(2h)(H_i^+(w+k h/2)z^-1 delta((w+k h)/z) - H_i^-(w-k h/2)z^-1 delta((w-k h)/z))"#,
    r#"[Y^-(h_i, z), Y^+(h_j, w)] = iota_{z,w} [h+_i(z), h-_j(w)]"#,
    r#"[a_ij]_{q^d}[l]_{q^d} (z - w + l hbar)^-2 expanded in w/z"#,
    r#"[e+_i(z), e+_j(w)] = 0 if a_ij >= 0"#,
    r#"[e+_i(z), e-_j(w)] = delta_ij (h_i(w) z^-1 delta(w/z) + k d_w z^-1 delta(w/z))"#,
    r#"[e+_i(z1), [e+_i(z2), e+_j(w)]] = 0 if a_ij = -1"#,
    r#"[e-_i(z), e-_j(w)] = 0 if a_ij >= 0"#,
    r#"[e-_i(z1), [e-_i(z2), e-_j(w)]] = 0 if a_ij = -1"#,
    r#"[e_1(1), f_1(-1)] 1 = (h_1(0) + l) 1 differs at l + 1"#,
    r#"[e_i(-1), e_j(-1)] 1 != 0 for a_ij = -1"#,
    r#"[e_i(z1),[e_i(z2),e_j(w)]] = 0 if a_ij = -1"#,
    r#"[e_i^+(z),e_j^-(w)] = d_ij(h_i(w)z^-1 delta(w/z) + k d_w z^-1 delta(w/z))"#,
    r#"[e_i^pm(z),e_j^pm(w)] = 0 if a_ij >= 0"#,
    r#"[h_i(z), e+_j(w)] = a_ij e+_j(w) z^-1 delta(w/z)"#,
    r#"[h_i(z), e-_j(w)] = -a_ij e-_j(w) z^-1 delta(w/z)"#,
    r#"[h_i(z), h_j(w)] = a_ij d_w z^-1 delta(w/z) k"#,
    r#"[h_i(z),e_j^pm(w)] = pm a_ij e_j^pm(w) z^-1 delta(w/z)"#,
    r#"[h_i(z),h_j(w)] = a_ij d_w z^-1 delta(w/z) k"#,
    r#"[h_i^+(z),h_j^+(w)] = 0"#,
    r#"[h_i^+(z),h_j^-(w)] = [a]_{q^{d_w}}[k]_{q^{d_w}}(z-w+k h)^-2"#,
    r#"[h_i^+(z),x_j^+(w)] = x_j^+(w)[a]_{q^{d_w}}(z-w+k h)^-1"#,
    r#"[h_i^+(z),x_j^-(w)] = -x_j^-(w)[a]_{q^{d_w}}(z-w+k h)^-1"#,
    r#"[h_i^-(z),h_j^+(w)] = -[a]_{q^{d_w}}[k]_{q^{d_w}}(w-z+k h)^-2"#,
    r#"[h_i^-(z),h_j^-(w)] = 0"#,
    r#"[h_i^-(z),x_j^+(w)] = x_j^+(w)[a]_{q^{d_w}}(w-z+k h)^-1"#,
    r#"[h_i^-(z),x_j^-(w)] = -x_j^-(w)[a]_{q^{d_w}}(w-z+k h)^-1"#,
    r#"a(x) b_m w in W_hbar((x)) for every m"#,
    r#"a(z)a(w)_0b(w) = a(w)_0b(w)a(z)(w-z-3h)/(w-z-h)"#,
    r#"a(z)a(w)_0b(w) = a(w)_0b(w)a(z)(w-z-3h)/(w-z-h) fails when the a-a0b numerator is shifted by h"#,
    r#"dim V_d = coefficient of q^d in prod_{n>=1} (1 - q^n)^{-dim g}"#,
    r#"dropping S(x) - 1 must break the identity"#,
    r#"dropping exp(E_gamma / 2) must break the identity"#,
    r#"exp((alpha + beta)_{-1}) 1_W = exp(E_gamma / 2) exp beta exp alpha, E_gamma = 0"#,
    r#"exp((alpha + beta)_{-1}) 1_W = exp(E_gamma / 2) exp beta exp alpha, E_gamma = hbar^2 gamma_ij(1,1)"#,
    r#"gamma_11(1,1) + hbar must break (x1 - x2 + mu hbar) a(x1) b(x2) = (x1 - x2 + nu hbar) b(x2) a(x1)"#,
    r#"gamma_11(1,1) + hbar must break the bracket"#,
    r#"gamma_ij(m, n) = 0 for n > m, hbar^{m-n} | gamma_ij(m, n)"#,
    r#"gamma_ij(m, n) = a_ij l m delta_{m,n} mod hbar"#,
    r#"iota_{z,w}(z-w)^{-1-j} - iota_{w,z}(z-w)^{-1-j} = (1/j!) d_w^j z^{-1}delta(w/z)"#,
    r#"iota_{z1,w}(z1-w-nu h)^{-1} - iota_{w,z1}(z1-w-nu h)^{-1} = z1^-1 delta((w+nu h)/z1)"#,
    r#"log((x+hbar)/(x-hbar)) = 2 hbar x^{-1} + (2/3) hbar^3 x^{-3} + ..."#,
    r#"log((x+m hbar)/(x-m hbar)) = G(d_x)[m]_{q^{d_x}} x^{-1}"#,
    r#"log((z-w-m hbar-k hbar)(z-w+m hbar+k hbar)/((z-w+m hbar-k hbar)(z-w-m hbar+k hbar))) = -G(d_z)G(d_z)[m]_{q^{d_z}}[k]_{q^{d_z}}(z-w)^{-2}"#,
    r#"mu = nu = 0: Sing_z Y_E(a, z) b = a_0 b z^-1"#,
    r#"nob(a(z)b(w)) = (z-w+nu h)a(z)b(w) = (z-w-nu h)b(w)a(z)"#,
    r#"nob(a(z1)a(z2)b(w))|_{z1=w+nu h, z2=w-nu h} = 0 <=> a(z)a(w)_0b(w) = a(w)_0b(w)a(z)(w-z-3h)/(w-z-h)"#,
    r#"nob(x_i^-(z1)x_i^-(z2)x_j^-(w)) = nob(Xb_i(z1)Xb_i(z2)Xb_j(w))K_i(z1)K_i(z2)K_j(w), Xb(z) = X^-(z-k h), K(z) = H^+(z-k h/2)^-1"#,
    r#"old -> new -> old = id, new -> old -> new = id"#,
    r#"substitution at level k + 1 against relations at level k"#,
    r#"sum_{s in S2} a(z_s1)a(z_s2)b(w) - 2a(z_s1)b(w)a(z_s2) + b(w)a(z_s1)a(z_s2)"#,
    r#"sum_{s in S2} a(z_s1)a(z_s2)b(w) - 2a(z_s1)b(w)a(z_s2) + b(w)a(z_s1)a(z_s2) <=> a(w)_0a(w)_0b(w) = 0"#,
    r#"the right side at z + hbar must differ from the left side at z"#,
    r#"without e^{(1 - l) hbar d} the two sides must differ unless l = 1"#,
    r#"x0^-1 delta((x1-x2)/x0) Y(u,x1)Y(v,x2) - x0^-1 delta((x2-x1)/-x0) Y(v,x2)Y(u,x1) S(x2-x1) = x2^-1 delta((x1-x0)/x2) Y(Y(u,x0)v,x2)"#,
    r#"x1^-1 delta((x - mu hbar)/x1) a(x)_0 b(x) = a(x1) b(x) - ((x - x1 - nu hbar)/(x - x1 - mu hbar)) b(x) a(x1)"#,
    r#"x_i^+(z) = X_i^+(z)"#,
    r#"x_i^+(z)x_j^+(w) = x_j^+(w)x_i^+(z) if a = 0"#,
    r#"x_i^+(z)x_j^-(w) - ((w-z+a h)/(w-z-a h))x_j^-(w)x_i^+(z) = d_ij/(2h)(z^-1 delta(w/z) - C_i(w)z^-1 delta((w-2k h)/z))"#,
    r#"x_i^-(z)x_j^-(w) = x_j^-(w)x_i^-(z) if a = 0"#,
    r#"z2^-1 delta((w-nu h)/z2) a(z1)nob(a(z2)b(w)) = z2^-1 delta((w-nu h)/z2)((z2-z1-2nu h)/(z2-z1))nob(a(z2)b(w))a(z1) + z1^-1 delta((w+nu h)/z1)z2^-1 delta((w-nu h)/z2)nob(a(z1)a(z2)b(w))"#,
    r#"z^-k ((x1 - x)^k a(x1) b(x))|_{x1 = x + z} independent of k"#,
];

pub fn is_known(a: &str) -> bool {
    ANCHORS.binary_search(&a).is_ok()
}

#[cfg(test)]
mod tests {
    #[test]
    fn sorted_and_distinct() {
        assert!(super::ANCHORS.windows(2).all(|w| w[0] < w[1]));
    }
}
