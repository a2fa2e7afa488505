"""Analytic derivatives of the node-reduced Hill Hamiltonian.

Auto-generated by tools/gen_hill_derivatives.py -- do not edit by hand.
State order: r1, w1, R1, G1, r2, w2, R2, G2; C is the angular-momentum
parameter and m0, m1, m2 the physical masses (G = 1 units).
"""

from math import cos, sin, sqrt


def ham(r1, w1, R1, G1, r2, w2, R2, G2, C, m0, m1, m2):
    x0 = 1/r1
    x1 = 1/r2
    x2 = 1/m0
    x3 = G1**2
    x4 = r1**2
    x5 = G2**2
    x6 = r2**2
    x7 = sin(w1)
    x8 = sin(w2)
    x9 = x7*x8
    x10 = 2*x9
    x11 = (-C**2 + x3 + x5)/(G1*G2)
    x12 = cos(w1)
    x13 = cos(w2)
    x14 = x12*x13
    x15 = G1*x0
    x16 = G2*x1
    x17 = x15*x16
    x18 = R2*x13
    x19 = R1*x12
    return -m0*m1*x0 - m0*m2*x1 - m1*m2/sqrt(-r1*r2*(x10 - x11*x14) + x4 + x6) + (1/2)*x2*(R1*R2*x10 + 2*R1*x13*x16*x7 + 2*R2*x12*x15*x8 - x11*(-x15*x18*x7 - x16*x19*x8 + x17*x9 + x18*x19) + 2*x14*x17) + (1/2)*x2*(R2**2 + x5/x6)*(m0 + m2)/m2 + (1/2)*x2*(R1**2 + x3/x4)*(m0 + m1)/m1


def grad(out, r1, w1, R1, G1, r2, w2, R2, G2, C, m0, m1, m2):
    x0 = r1**2
    x1 = 1/x0
    x2 = G1**2
    x3 = 1/m0
    x4 = (m0 + m1)/m1
    x5 = x3*x4
    x6 = cos(w1)
    x7 = sin(w2)
    x8 = 2*x7
    x9 = x6*x8
    x10 = R2*x9
    x11 = 1/r2
    x12 = G2*x11
    x13 = cos(w2)
    x14 = x13*x6
    x15 = 2*x12*x14
    x16 = sin(w1)
    x17 = x12*x7
    x18 = -R2*x13 + x17
    x19 = 1/G2
    x20 = G2**2
    x21 = -C**2 + x2 + x20
    x22 = -x21
    x23 = x19*x22
    x24 = (1/2)*x3
    x25 = x16*x8
    x26 = 1/G1
    x27 = x14*x26
    x28 = r2**2
    x29 = x19*x21*x26
    x30 = r1*(-x14*x29 + x25)
    x31 = (-r2*x30 + x0 + x28)**(-3/2)
    x32 = x13*x16
    x33 = m1*m2*x31
    x34 = r1*r2
    x35 = x33*x34
    x36 = 1/r1
    x37 = G1*x36
    x38 = x16*x37
    x39 = x12*x13
    x40 = x38*x39
    x41 = R2*x13
    x42 = R1*x16
    x43 = x17*x42
    x44 = x37*x6
    x45 = x17*x44
    x46 = x16*x7
    x47 = R2*x46
    x48 = x29*x6
    x49 = x21/x2
    x50 = (1/2)*x33
    x51 = x34*x50
    x52 = R1*x6
    x53 = x17*x38 - x17*x52 - x38*x41 + x41*x52
    x54 = 2*x53
    x55 = 1/x28
    x56 = (m0 + m2)/m2
    x57 = x3*x56
    x58 = 2*x32
    x59 = R1*x58
    x60 = 2*x13*x44
    x61 = -R1*x6 + x38
    x62 = x29*x61
    x63 = x21/x20
    out[0] = m0*m1*x1 + (1/2)*m1*m2*x31*(2*r1 - r2*(x23*x27 + x25)) - x1*x24*(G1*x10 + G1*x15 + x16*x18*x23) - x2*x5/r1**3
    out[1] = (1/2)*x3*(2*G2*R1*x11*x13*x6 + 2*R1*R2*x6*x7 - R2*x25*x37 - x29*(-x41*x42 - x41*x44 + x43 + x45) - 2*x40) - 1/2*x35*(x29*x32 + x9)
    out[2] = x3*(R1*x4 + x12*x32 + (1/2)*x18*x48 + x47)
    out[3] = G1*x1*x5 + x14*x19*x51*(2 - x49) + x24*(x10*x36 + x15*x36 - x16*x18*x29*x36 + x19*x49*x53 - x19*x54)
    out[4] = m0*m2*x55 - x24*x55*(G2*x59 + G2*x60 + x22*x26*x61*x7) - x50*(-2*r2 + x30) - x20*x57/r2**3
    out[5] = (1/2)*x3*(2*G1*R2*x13*x36*x6 + 2*R1*R2*x13*x16 - x29*(-R2*x52*x7 + x37*x47 - x39*x52 + x40) - 2*x43 - 2*x45) - 1/2*x35*(x48*x7 + x58)
    out[6] = x3*(R1*x46 + R2*x56 + (1/2)*x13*x62 + x44*x7)
    out[7] = G2*x55*x57 + x24*(x11*x59 + x11*x60 - x11*x62*x7 + x26*x53*x63 - x26*x54) + x27*x51*(2 - x63)
    return None


def dham_dc(r1, w1, R1, G1, r2, w2, R2, G2, C, m0, m1, m2):
    x0 = cos(w2)
    x1 = R2*x0
    x2 = cos(w1)
    x3 = R1*x2
    x4 = sin(w1)
    x5 = G1/r1
    x6 = sin(w2)
    x7 = G2/r2
    x8 = x4*x6
    x9 = 1/(G1*G2)
    x10 = x0*x2
    x11 = r1*r2
    return C*x9*(-m1*m2*x10*x11/(r1**2 + r2**2 - x11*(-x10*x9*(-C**2 + G1**2 + G2**2) + 2*x8))**(3/2) + (x1*x3 - x1*x4*x5 - x3*x6*x7 + x5*x7*x8)/m0)


def hess_and_dgrad_dc(out_h, out_c, r1, w1, R1, G1, r2, w2, R2, G2, C, m0, m1, m2):
    x0 = r1**(-3)
    x1 = 2*m0
    x2 = G1**2
    x3 = 1/m0
    x4 = 1/m1
    x5 = m0 + m1
    x6 = x4*x5
    x7 = x3*x6
    x8 = r1**2
    x9 = r2**2
    x10 = sin(w1)
    x11 = sin(w2)
    x12 = x10*x11
    x13 = 2*x12
    x14 = cos(w2)
    x15 = cos(w1)
    x16 = x14*x15
    x17 = 1/G1
    x18 = G2**2
    x19 = -C**2 + x18 + x2
    x20 = 1/G2
    x21 = x19*x20
    x22 = x17*x21
    x23 = x16*x22
    x24 = x13 - x23
    x25 = r2*x24
    x26 = -r1*x25 + x8 + x9
    x27 = x26**(-3/2)
    x28 = m1*m2
    x29 = x27*x28
    x30 = R2*x11
    x31 = x15*x30
    x32 = 2*G1
    x33 = 1/r2
    x34 = G2*x33
    x35 = x14*x34
    x36 = x15*x35
    x37 = R2*x14
    x38 = x11*x34
    x39 = -x37 + x38
    x40 = x10*x39
    x41 = x21*x40
    x42 = x0*x3
    x43 = 2*r1
    x44 = x26**(-5/2)
    x45 = x28*x44
    x46 = (3/4)*x45
    x47 = 2*x10
    x48 = G1*x47
    x49 = x15*x39
    x50 = 1/x8
    x51 = x3*x50
    x52 = 2*x51
    x53 = x11*x15
    x54 = 2*x53
    x55 = x10*x14
    x56 = x22*x55
    x57 = x54 + x56
    x58 = 2*r2
    x59 = x29*x58
    x60 = -x19
    x61 = x20*x60
    x62 = x17*x61
    x63 = x13 + x16*x62
    x64 = -r2*x63 + x43
    x65 = 3*x45
    x66 = x64*x65
    x67 = r1*r2
    x68 = x66*x67
    x69 = (1/4)*x52*(x21*x49 + x30*x48 + x35*x48) - 1/4*x57*x59 + (1/4)*x57*x68
    x70 = -x39
    x71 = x10*x70
    x72 = x31 + x36
    x73 = 1/x2
    x74 = x60*x73
    x75 = x74 + 2
    x76 = x16*x20
    x77 = x75*x76
    x78 = (1/2)*m1*m2*r2*x14*x15*x20*x27*x75 - x32*x42*x6 - x46*x64*x67*x77 - x51*(G1*x20*x71 + x72)
    x79 = 1/x9
    x80 = 2*x16
    x81 = G1*x80
    x82 = x12*x19
    x83 = r1*x24 - x58
    x84 = -1/2*x24*x29 + (1/4)*x52*x79*(G2*x81 - x82) + (1/4)*x66*x83
    x85 = x15*x37
    x86 = x15*x38
    x87 = x30 + x35
    x88 = x21*x87
    x89 = x14*x47
    x90 = x22*x53
    x91 = x89 + x90
    x92 = (1/4)*x52*(x10*x88 - x32*x85 + x32*x86) - 1/4*x59*x91 + (1/4)*x68*x91
    x93 = -x51*(G1*x53 + (1/2)*x21*x55)
    x94 = 1/x18
    x95 = x60*x94
    x96 = x95 + 2
    x97 = x16*x17
    x98 = (1/2)*m1*m2*r2*x14*x15*x17*x27*x96 - 1/4*x52*(x12*x33*x61 + x33*x81 + x47*x70 + x71*x95) - 1/4*x68*x96*x97
    x99 = x8*x9
    x100 = x65*x99
    x101 = R1*x10
    x102 = x101*x30
    x103 = 1/r1
    x104 = G1*x103
    x105 = x104*x31
    x106 = x101*x35
    x107 = x104*x15
    x108 = x107*x35
    x109 = R1*x15
    x110 = x104*x12
    x111 = -G1*R2*x10*x103*x14 - G2*R1*x11*x15*x33 + x109*x37 + x110*x34
    x112 = 2*x3
    x113 = -2*m1*m2*r1*r2*x27*x63 + x112*(2*x102 + 2*x105 + 2*x106 + 2*x108 + x111*x62)
    x114 = (1/2)*x17
    x115 = x3*(-x114*x41 + x72)
    x116 = x29*x43
    x117 = r2*x116
    x118 = x117*x55
    x119 = x19*x73
    x120 = -x119
    x121 = x20*(x120 + 2)
    x122 = x103*x47
    x123 = x17*x49
    x124 = -x101*x37 + x101*x38 - x107*x37 + x107*x38
    x125 = 2*x124
    x126 = x20*x74
    x127 = (3/4)*m1*m2*x14*x15*x20*x44*x57*x75*x8*x9 - 1/4*x112*(-x103*x123*x61 + x122*x30 + x122*x35 + x124*x126 + x125*x20) - 1/4*x118*x121
    x128 = 2*G2
    x129 = x109*x14
    x130 = x104*x89
    x131 = x17*x19
    x132 = x101 + x107
    x133 = x11*x132
    x134 = x67*x83
    x135 = x134*x65
    x136 = -1/4*x116*x57 - 1/4*x135*x57 + (1/2)*x3*x79*(G2*x130 - x128*x129 + x131*x133)
    x137 = x17*x20
    x138 = x137*x82
    x139 = -1/4*x100*x57*x91 - 1/4*x117*(-x138 + x80) + (1/2)*x3*(2*G1*G2*x10*x103*x11*x33 + 2*R1*R2*x14*x15 - x104*x37*x47 - 2*x109*x38 - x22*(x102 + x105 + x106 + x108))
    x140 = (1/2)*x22
    x141 = x3*(x109*x11 - x110 + x132*x14*x140)
    x142 = x19*x94
    x143 = -x142
    x144 = x17*(x143 + 2)
    x145 = 2*x33
    x146 = x17*x95
    x147 = (3/4)*m1*m2*x14*x15*x17*x44*x57*x8*x9*x96 - 1/4*x112*(x124*x146 + x125*x17 - x129*x145 + x130*x33 - x133*x33*x62) - 1/4*x118*x144
    x148 = x20*x3
    x149 = -x148*x49*((1/2)*x19*x73 - 1)
    x150 = x3*x79
    x151 = -x150*(G2*x55 + (1/2)*x131*x53)
    x152 = x3*(x10*x37 + x114*x15*x88 - x12*x34)
    x153 = x3*(x12 - 1/2*x23)
    x154 = -x3*(-x123 + (1/2)*x15*x17*x19*x39*x94 - x33*x55 - 1/2*x33*x90)
    x155 = r2*x29
    x156 = r1*x155
    x157 = x137*x156*x16
    x158 = x14**2*x15**2
    x159 = x158*x46*x99
    x160 = x122*x39
    x161 = x103*x40
    x162 = -x111*x17
    x163 = x111*x60
    x164 = x103*x80
    x165 = x10*x104
    x166 = -R1*x15 + x165
    x167 = -x11*x166
    x168 = x17*x60
    x169 = -1/4*x112*x79*(G2*x164 + x103*x12*x168 + x167*x74 + 2*x167) + (1/4)*x116*x77 + (1/4)*x135*x77
    x170 = x117*x53
    x171 = 2*x103
    x172 = -x109*x30 - x109*x35 + x165*x30 + x165*x35
    x173 = 2*x172
    x174 = (3/4)*m1*m2*x14*x15*x20*x44*x75*x8*x9*x91 - 1/4*x112*(-x10*x103*x62*x87 + x126*x172 - x171*x85 + x171*x86 + x173*x20) - 1/4*x121*x170
    x175 = x14*x166
    x176 = x175*x20
    x177 = -x3*(-x103*x53 - 1/2*x103*x56 + (1/2)*x14*x166*x19*x20*x73 - x176)
    x178 = 2*x73
    x179 = 2*x94
    x180 = x119*x94
    x181 = x11*x166
    x182 = x181*x33
    x183 = 2*x182
    x184 = -1/4*x100*x137*x158*x75*x96 - 1/4*x117*x16*(x178 + x179 - x180) + (1/2)*x3*(-x103*x138*x33 + x111*x178 + x111*x179 - x111*x180 + x119*x182*x20 + x142*x161*x17 - x160*x17 + x164*x33 - x183*x20)
    x185 = r2**(-3)
    x186 = 1/m2
    x187 = m0 + m2
    x188 = x186*x187
    x189 = x188*x3
    x190 = x101*x14
    x191 = x107*x14
    x192 = x101*x11
    x193 = x104*x54
    x194 = -1/4*x116*x91 - 1/4*x135*x91 + (1/2)*x3*x79*(G2*x193 + x128*x192 + x131*x175)
    x195 = x190 + x191
    x196 = -G2*x112*x185*x188 + (3/4)*m1*m2*r1*r2*x14*x15*x17*x44*x83*x96 + (1/2)*m1*m2*r1*x14*x15*x17*x27*x96 - x150*(G2*x167*x17 + x195)
    x197 = x3*(-x140*x181 + x195)
    x198 = (3/4)*m1*m2*x14*x15*x17*x44*x8*x9*x91*x96 - 1/4*x112*(x145*x192 + x146*x172 - x168*x176*x33 + x17*x173 + x193*x33) - 1/4*x144*x170
    x199 = x17*x3
    x200 = -x175*x199*((1/2)*x19*x94 - 1)
    x201 = -x111*x20
    x202 = x155*x97
    x203 = C*x20
    x204 = (3/2)*x45
    x205 = x204*x99
    x206 = x16*x205
    x207 = x17*x203
    x208 = x158*x205
    x209 = C*x17
    out_h[0] = -m1*x0*x1 + x29 + x42*(x31*x32 + x32*x36 - x41) - x46*(-x25 + x43)**2 + 3*x2*x7/r1**4
    out_h[1] = x69
    out_h[2] = 0
    out_h[3] = x78
    out_h[4] = x84
    out_h[5] = x92
    out_h[6] = x93
    out_h[7] = x98
    out_h[8] = x69
    out_h[9] = -1/4*x100*x57**2 - 1/4*x113
    out_h[10] = x115
    out_h[11] = x127
    out_h[12] = x136
    out_h[13] = x139
    out_h[14] = x141
    out_h[15] = x147
    out_h[16] = 0
    out_h[17] = x115
    out_h[18] = x7
    out_h[19] = x149
    out_h[20] = x151
    out_h[21] = x152
    out_h[22] = x153
    out_h[23] = x154
    out_h[24] = x78
    out_h[25] = x127
    out_h[26] = x149
    out_h[27] = -x148*(x160 + x161*x74 + x162 - x163/G1**3) - x157*(x120 + 1) - x159*x75**2*x94 + x3*x4*x5*x50
    out_h[28] = x169
    out_h[29] = x174
    out_h[30] = x177
    out_h[31] = x184
    out_h[32] = x84
    out_h[33] = x136
    out_h[34] = x151
    out_h[35] = x169
    out_h[36] = -m2*x1*x185 + x185*x3*(x128*x190 + x128*x191 - x131*x181) + x29 - x46*x83**2 + 3*x18*x189/r2**4
    out_h[37] = x194
    out_h[38] = 0
    out_h[39] = x196
    out_h[40] = x92
    out_h[41] = x139
    out_h[42] = x152
    out_h[43] = x174
    out_h[44] = x194
    out_h[45] = -1/4*x100*x91**2 - 1/4*x113
    out_h[46] = x197
    out_h[47] = x198
    out_h[48] = x93
    out_h[49] = x141
    out_h[50] = x153
    out_h[51] = x177
    out_h[52] = 0
    out_h[53] = x197
    out_h[54] = x189
    out_h[55] = x200
    out_h[56] = x98
    out_h[57] = x147
    out_h[58] = x154
    out_h[59] = x184
    out_h[60] = x196
    out_h[61] = x198
    out_h[62] = x200
    out_h[63] = -x157*(x143 + 1) - x159*x73*x96**2 + x186*x187*x3*x79 - x199*(x182*x95 + x183 + x201 - x163/G2**3)
    out_c[0] = x203*((3/2)*m1*m2*r1*r2*x14*x15*x17*x44*x64 - x202 - x40*x51)
    out_c[1] = x207*(x124*x3 + x156*x55 - x206*x57)
    out_c[2] = -C*x123*x148
    out_c[3] = x207*(r1*x202 + x121*x208 + x3*(x161 + x162))
    out_c[4] = -x209*(r1*x29*x76 + x134*x204*x76 + x150*x181)
    out_c[5] = x207*(x156*x53 + x172*x3 - x206*x91)
    out_c[6] = -x148*x175*x209
    out_c[7] = x207*(x144*x208 + x156*x76 + x3*(x182 + x201))
    return None

