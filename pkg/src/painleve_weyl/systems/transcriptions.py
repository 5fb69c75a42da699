"""Verbatim text transcriptions of the displayed formulas.

Each string follows the printed grouping term by term so that it can be
proofread against the source display.  Greek letters are spelled out
(``alpha0``, ``beta1``, ``eta``, ``phi``); ``b`` is the coefficient function
b(t) and ``db`` its t-derivative.
"""

# Third-order D4(1) system.  Each entry is the bracketed right-hand side
# after multiplying by 2*eta/b (the y-entry carries the printed minus sign
# on the left, i.e. it is -2*eta/b * dy/dt).
D4_P1 = """
-2*x*(y-1)*y*z*(x-eta)*(2*x-2*y+1-eta) - 2*(2*alpha0+2*alpha1+4*alpha2+alpha3+alpha4)*x^3*y
- 2*(alpha0+alpha1)*x*y^3 + (5*alpha0+5*alpha1+6*alpha2+alpha3+alpha4)*x^2*y^2
- (5*alpha0+5*alpha1+6*alpha2+2*alpha3 - 3*(2*alpha0+2*alpha1+4*alpha2+alpha3+alpha4)*eta)*x^2*y
+ (3*(alpha0+alpha1) - (4*alpha0+6*alpha1+6*alpha2+alpha3+alpha4)*eta)*x*y^2 + x^4
+ 2*(alpha0+alpha1+2*alpha2+alpha3-eta)*x^3 + 2*alpha1*eta*y^3
+ ((alpha0+alpha1+2*alpha2+alpha3)*(eta^2-3*eta+1) + alpha4*eta^2)*x^2 + alpha1*(eta-3)*eta*y^2
+ (-(alpha0+alpha1) + 2*(2*alpha0+3*alpha1+3*alpha2+alpha3)*eta - (2*alpha0+2*alpha1+4*alpha2+alpha3+alpha4)*eta^2)*x*y
+ (alpha0+alpha1+2*alpha2+alpha3)*(eta-1)*eta*x - alpha1*(eta-1)*eta*y
"""

D4_P2 = """
2*x*(y-1)*y*z*(x-eta)*(2*x-2*y+1-eta) - 2*(alpha3+alpha4)*x^3*y
- 2*x*y^3*(alpha0+alpha1+4*alpha2+2*alpha3+2*alpha4) + x^2*y^2*(alpha0+alpha1+6*alpha2+5*alpha3+5*alpha4)
+ x^2*y*(-(alpha0+alpha1+6*alpha2+4*alpha3+6*alpha4) + 3*(alpha3+alpha4)*eta)
+ x*y^2*(3*(alpha0+alpha1+4*alpha2+2*alpha3+2*alpha4) - (2*alpha0+6*alpha2+5*alpha3+5*alpha4)*eta) + y^4 + 2*alpha4*x^3
+ 2*y^3*((alpha0+2*alpha2+alpha3+alpha4)*eta - 1) - alpha4*(3*eta-1)*x^2
+ y^2*(1 - 3*(alpha0+2*alpha2+alpha3+alpha4)*eta + (alpha0+2*alpha2+alpha3+alpha4)*eta^2)
+ x*y*(-(alpha0+alpha1+4*alpha2+2*alpha3+2*alpha4) + 2*(alpha0+3*alpha2+2*alpha3+3*alpha4)*eta - (alpha3+alpha4)*eta^2)
+ alpha4*(eta-1)*eta*x - (alpha0+2*alpha2+alpha3+alpha4)*(eta-1)*eta*y
"""

D4_P3 = """
(2*x-2*y+1-eta)*(2*x^2*y + 2*x*y^2 - x^2 - y^2*eta - 2*(eta+1)*x*y + eta*(x+y))*z^2
+ z*(-2*x^3*(alpha3+alpha4) + 2*y^3*(alpha0+alpha1) + 2*x^2*y*(alpha0+alpha1+6*alpha2+2*alpha3+2*alpha4)
  - 2*x*y^2*(2*alpha0+2*alpha1+6*alpha2+alpha3+alpha4)
  + x^2*(-(alpha0+alpha1+6*alpha2+4*alpha3) + 3*(alpha3+alpha4)*eta)
  + y^2*(-3*(alpha0+alpha1) + (4*alpha0+6*alpha2+alpha3+alpha4)*eta)
  - 4*x*y*(-(alpha0+alpha1+3*alpha2+alpha3) + (alpha0+3*alpha2+alpha3+alpha4)*eta)
  + x*(-(alpha0+alpha1+4*alpha2+2*alpha3) + 2*(alpha0+3*alpha2+2*alpha3)*eta - (alpha3+alpha4)*eta^2)
  + y*(alpha0+alpha1 - 2*(2*alpha0+3*alpha2+alpha3)*eta + (2*alpha0+4*alpha2+alpha3+alpha4)*eta^2)
  - (alpha0+2*alpha2+alpha3)*(eta-1)*eta)
+ alpha2*((alpha0+alpha1+2*alpha2-alpha3-alpha4)*x^2
  + (alpha0+alpha1-2*alpha2-alpha3-alpha4)*y^2 - 2*(alpha0+alpha1-alpha3-alpha4)*x*y
  + x*(alpha0+alpha1-2*alpha3 - (2*alpha0+2*alpha2-alpha3-alpha4)*eta)
  + y*(-alpha0-alpha1+2*alpha2+2*alpha3 + (2*alpha0-alpha3-alpha4)*eta)
  + (eta-1)*(alpha2+alpha3+(alpha0+alpha2)*eta))
"""

# Symmetric form of P_V: df_i/dt = (phi/2) * sign_i * Q_i.
PV_Q = (
    "-2*f0*f1*f2 + a*f0*f2 + (alpha0+alpha1+alpha3)*f0 - alpha0*f2",
    "-f0*f1^2 - f1^2*f2 + a*f0*f1 + a*f1*f2 - a*alpha1 + (alpha1+alpha3)*f1",
    "-2*f0*f1*f2 + a*f0*f2 + (alpha1+alpha2+alpha3)*f2 - alpha2*f0",
)
PV_SIGNS = (-1, 1, -1)

# Symmetric form of P_III.
PIII_F = (
    "-2*f0*f1*f2 + (alpha0+2*alpha1)*f0 - alpha0*f2",
    "(f0+f2)*f1^2 - 2*alpha1*f1 + eta",
    "-2*f0*f1*f2 + (2*alpha1+alpha2)*f2 - alpha2*f0",
)

# Hamiltonians.
H_VI = """
(Y^2*(X-t)*(X-1)*X - ((A1-1)*(X-1)*X + A3*(X-t)*X + A4*(X-t)*(X-1))*Y
 + A2*(A0+A2)*X) / (t*(t-1))
"""

# The x=y reduction; H = H_X_EQ_Y_PREFACTOR * H_X_EQ_Y_BRACKET.
H_X_EQ_Y_PREFACTOR = "-(eta-1)*b/(2*eta)"
H_X_EQ_Y_BRACKET = """
-(X-1)*(X-eta)*X^2*Y^2 - (2*alpha2*(X-1)*(X-eta) - alpha0*eta*(X-1) - alpha3*(X-eta))*X*Y
- alpha2^2*X^2 + alpha2*(1 - (alpha0+alpha1+alpha2+alpha4) + (1 - (alpha1+alpha2+alpha3+alpha4))*eta)*X
"""

H_V = """
-x^2*y^2/T + a*x^2*y/T - x*y^2 + (a + (alpha1+alpha3)/T)*x*y - alpha0*y - a*alpha1*x/T
"""

H_III = """
(x^2*y^2 - eta*x^2*y + 2*(alpha1+alpha2)*x*y - T*y - eta*alpha2*x)/T
"""

# The displayed Hamiltonian systems (d/dT of x and y).
PV_DISPLAYED = (
    "-2*x^2*y/T + a*x^2/T - 2*x*y + (a + (alpha1+alpha3)/T)*x - alpha0",
    "2*x*y^2/T + y^2 - 2*a*x*y/T - (a + (alpha1+alpha3)/T)*y + a*alpha1/T",
)
PIII_DISPLAYED = (
    "2*x^2*y/T - eta*x^2/T + 2*(alpha1+alpha2)*x/T - 1",
    "-2*x*y^2/T + 2*eta*x*y/T - 2*(alpha1+alpha2)*y/T + eta*alpha2/T",
)

# Second-order equation obtained by eliminating Y from the x=y system.
# Xp stands for dX/dt.
SECOND_ORDER_RHS = """
(1/(2*(X-1)) + 1/X + 1/(2*(X-eta)))*Xp^2 + db/b*Xp
- b^2/(8*eta^2*(X-1)*(X-eta))*((eta-1)^3*X^2*((alpha0*eta+alpha3)*X - (1-(alpha1+2*alpha2+alpha4))*eta)
  *((alpha0*eta-alpha3)*X + (1-(2*alpha0+alpha1+2*alpha2+alpha4))*eta))
"""

B_PVI_FORM = "2*eta/(t*(t-1)*(t+eta)*(t+eta-1))"
B_PVI_FORM_EXPANDED = "2*eta/(t*(t-1)*(t^2+(2*eta-1)*t+eta*(eta-1)))"
