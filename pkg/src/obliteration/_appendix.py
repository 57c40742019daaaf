"""Published bound tables and the printed bounding polynomial, transcribed verbatim.

Rows are indexed by the number of forms m = 1..8, columns by the plane
dimension j = 0..8.  The degree column is 2^m, 3^m, 4^m respectively and is
not stored.  ``PRINTED_Q`` keeps the printed term order.
"""

QUADRIC_TABLE = (
    (1, 3, 5, 7, 9, 11, 13, 15, 17),
    (2, 5, 8, 11, 14, 17, 20, 23, 26),
    (5, 9, 13, 17, 21, 25, 29, 33, 37),
    (8, 13, 18, 23, 28, 33, 38, 43, 48),
    (13, 19, 25, 31, 37, 43, 49, 55, 61),
    (18, 25, 32, 39, 46, 53, 60, 67, 74),
    (25, 33, 41, 49, 57, 65, 73, 81, 89),
    (32, 41, 50, 59, 68, 77, 86, 95, 104),
)

CUBIC_TABLE = (
    (1, 5, 10, 18, 27, 39, 52, 68, 85),
    (5, 16, 33, 56, 85, 120, 161, 208, 261),
    (16, 42, 81, 131, 194, 268, 355, 453, 564),
    (42, 95, 168, 261, 374, 507, 660, 833, 1026),
    (95, 189, 312, 466, 649, 863, 1106, 1380, 1683),
    (189, 340, 533, 768, 1045, 1364, 1725, 2128, 2573),
    (340, 568, 853, 1193, 1590, 2042, 2551, 3115, 3736),
    (568, 897, 1298, 1771, 2316, 2933, 3622, 4383, 5216),
)

QUARTIC_TABLE = (
    (1, 10, 44, 133, 319, 656, 1210, 2059, 3293),
    (10, 114, 502, 1476, 3442, 6918, 12526, 21000, 33178),
    (114, 858, 3180, 8460, 18510, 35574, 62328, 101880, 157770),
    (858, 4463, 14028, 33933, 69758, 128283, 217488, 346553, 525858),
    (4463, 17714, 48650, 108401, 210797, 372368, 612344, 952655, 1417931),
    (17714, 57680, 142062, 295218, 546802, 931756, 1490318, 2268014, 3315666),
    (57680, 161736, 364492, 713828, 1267032, 2090800, 3261236, 4863852, 6993568),
    (161736, 403665, 845322, 1573467, 2690412, 4314021, 6577710, 9630447, 13636752),
)

TABLES = {"quadric": QUADRIC_TABLE, "cubic": CUBIC_TABLE, "quartic": QUARTIC_TABLE}

PRINTED_Q = " + ".join((
    "1/128*m4^8 + 1/16*j*m4^7 + 1/96*m4^7 + 3/16*j^2*m4^6 + 5/48*j*m4^6",
    "1/16*m3*m4^6 + 17/576*m4^6 + 1/4*j^3*m4^5 + 17/48*j^2*m4^5",
    "11/48*j*m4^5 + 5/48*m3*m4^5 + 3/8*j*m3*m4^5 + 1/48*m4^5",
    "1/8*j^4*m4^4 + 1/2*j^3*m4^4 + 29/48*j^2*m4^4 + 3/16*m3^2*m4^4",
    "11/48*j*m4^4 + 1/8*m2*m4^4 + 3/4*j^2*m3*m4^4 + 1/6*m3*m4^4",
    "17/24*j*m3*m4^4 + 169/1152*m4^4 + 1/4*j^4*m4^3 + 7/12*j^3*m4^3",
    "31/48*j^2*m4^3 + 7/24*m3^2*m4^3 + 3/4*j*m3^2*m4^3 + 17/24*j*m4^3",
    "1/12*m2*m4^3 + 1/2*j*m2*m4^3 + 1/2*j^3*m3*m4^3 + 3/2*j^2*m3*m4^3",
    "3/16*m3*m4^3 + 23/24*j*m3*m4^3 + 3/32*m4^3 + 1/8*j^4*m4^2",
    "1/2*j^3*m4^2 + 1/4*m3^3*m4^2 + 23/24*j^2*m4^2 + 3/4*j^2*m3^2*m4^2",
    "5/16*m3^2*m4^2 + 5/4*j*m3^2*m4^2 + 2/3*j*m4^2 + 1/2*j^2*m2*m4^2",
    "3/8*m2*m4^2 + 1/2*j*m2*m4^2 + j^3*m3*m4^2 + 3/2*j^2*m3*m4^2",
    "25/48*m3*m4^2 + 25/24*j*m3*m4^2 + 1/2*m2*m3*m4^2 + 91/288*m4^2",
    "1/6*j^3*m4 + 1/4*m3^3*m4 + 1/2*j*m3^3*m4 + 3/4*j^2*m4",
    "5/4*j^2*m3^2*m4 + 5/24*m3^2*m4 + j*m3^2*m4 + j*m4 + 1/2*j^2*m2*m4",
    "j*m2*m4 + 5/12*m2*m4 + 1/2*j^3*m3*m4 + 5/4*j^2*m3*m4 + 17/12*j*m3*m4",
    "1/2*m2*m3*m4 + j*m2*m3*m4 + 11/24*m3*m4 + 3/8*m4 + 1/8*m3^4",
    "1/2*j*m3^3 + 1/12*m3^3 + 1/2*m2^2 + 1/2*j^2*m3^2 + 1/2*j*m3^2",
    "1/2*m2*m3^2 + 3/8*m3^2 + j + j*m2 + 1/2*m2 + 1/2*j^2*m3 + j*m3",
    "j*m2*m3 + 1/2*m2*m3 + 5/12*m3 + 1/4",
))
