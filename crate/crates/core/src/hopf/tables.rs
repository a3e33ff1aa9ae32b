//! Integer coefficient tables `(c, i, j)` for `c * a1^i * a4^j`.

pub(crate) type Term = (f64, u8, u8);

pub(crate) const M00_A10: &[Term] = &[
    (2.0, 0, 0),
];

pub(crate) const M00_B01: &[Term] = &[
    (2.0, 0, 0),
];

pub(crate) const M00_B11: &[Term] = &[
    (0.0, 0, 0),
];

pub(crate) const M01_A10: &[Term] = &[
    (10.0, 0, 0), (-14.0, 0, 1), (-20.0, 0, 2), (-13.0, 1, 0), (7.0, 1, 1), (13.0, 2, 0),
];

pub(crate) const M01_B01: &[Term] = &[
    (10.0, 0, 0), (10.0, 0, 1), (4.0, 0, 2), (-1.0, 1, 0), (-5.0, 1, 1), (1.0, 2, 0),
];

pub(crate) const M01_B11: &[Term] = &[
    (12.0, 0, 0), (12.0, 0, 1),
];

pub(crate) const M02_A10: &[Term] = &[
    (1540.0, 0, 0), (-280.0, 0, 1), (-3948.0, 0, 2), (-4432.0, 0, 3), (-2096.0, 0, 4),
    (-980.0, 1, 0), (-1512.0, 1, 1), (1620.0, 1, 2), (3080.0, 1, 3), (861.0, 2, 0),
    (1566.0, 2, 1), (-279.0, 2, 2), (-626.0, 3, 0), (-1018.0, 3, 1), (313.0, 4, 0),
];

pub(crate) const M02_B01: &[Term] = &[
    (1540.0, 0, 0), (3080.0, 0, 1), (2772.0, 0, 2), (1424.0, 0, 3), (400.0, 0, 4),
    (700.0, 1, 0), (168.0, 1, 1), (-828.0, 1, 2), (-712.0, 1, 3), (21.0, 2, 0), (126.0, 2, 1),
    (369.0, 2, 2), (-2.0, 3, 0), (-58.0, 3, 1), (1.0, 4, 0),
];

pub(crate) const M02_B11: &[Term] = &[
    (1680.0, 0, 0), (3360.0, 0, 1), (2928.0, 0, 2), (1248.0, 0, 3), (840.0, 1, 0),
    (432.0, 1, 1), (-408.0, 1, 2), (24.0, 2, 0), (24.0, 2, 1),
];

pub(crate) const M03_A10: &[Term] = &[
    (3403400.0, 0, 0), (3003000.0, 0, 1), (-7327320.0, 0, 2), (-17811640.0, 0, 3),
    (-18033936.0, 0, 4), (-10462368.0, 0, 5), (-3159616.0, 0, 6), (-300300.0, 1, 0),
    (-4984980.0, 1, 1), (-4430580.0, 1, 2), (5794692.0, 1, 3), (12107904.0, 1, 4),
    (7149264.0, 1, 5), (690690.0, 2, 0), (3314850.0, 2, 1), (4201218.0, 2, 2),
    (-1296282.0, 2, 3), (-4589772.0, 2, 4), (-500885.0, 3, 0), (-2444439.0, 3, 1),
    (-3253551.0, 3, 2), (-407053.0, 3, 3), (323121.0, 4, 0), (1420500.0, 4, 1),
    (1471287.0, 4, 2), (-168603.0, 5, 0), (-520311.0, 5, 1), (56201.0, 6, 0),
];

pub(crate) const M03_B01: &[Term] = &[
    (3403400.0, 0, 0), (10210200.0, 0, 1), (14294280.0, 0, 2), (12236840.0, 0, 3),
    (6994704.0, 0, 4), (2670432.0, 0, 5), (578624.0, 0, 6), (3303300.0, 1, 0),
    (5825820.0, 1, 1), (2721180.0, 1, 2), (-1891308.0, 1, 3), (-2964576.0, 1, 4),
    (-1335216.0, 1, 5), (690690.0, 2, 0), (404250.0, 2, 1), (262458.0, 2, 2),
    (1121838.0, 2, 3), (1076988.0, 2, 4), (11935.0, 3, 0), (-11379.0, 3, 1), (-149091.0, 3, 2),
    (-366193.0, 3, 3), (-699.0, 4, 0), (1380.0, 4, 1), (46227.0, 4, 2), (417.0, 5, 0),
    (-291.0, 5, 1), (-139.0, 6, 0),
];

pub(crate) const M03_B11: &[Term] = &[
    (3603600.0, 0, 0), (10810800.0, 0, 1), (15024240.0, 0, 2), (12514320.0, 0, 3),
    (6566400.0, 0, 4), (1869120.0, 0, 5), (3603600.0, 1, 0), (6597360.0, 1, 1),
    (3764880.0, 1, 2), (-618480.0, 1, 3), (-1389600.0, 1, 4), (790020.0, 2, 0),
    (480060.0, 2, 1), (11340.0, 2, 2), (321300.0, 2, 3), (12600.0, 3, 0), (-10800.0, 3, 1),
    (-23400.0, 3, 2), (180.0, 4, 0), (180.0, 4, 1),
];

pub(crate) const M10_A10: &[Term] = &[
    (2.0, 0, 0), (-4.0, 0, 1),
];

pub(crate) const M10_B01: &[Term] = &[
    (2.0, 0, 0), (2.0, 1, 0),
];

pub(crate) const M10_B11: &[Term] = &[
    (2.0, 0, 0), (2.0, 1, 0),
];

pub(crate) const M11_A10: &[Term] = &[
    (10.0, 0, 0), (-6.0, 0, 1), (-8.0, 0, 3), (33.0, 1, 0), (-21.0, 1, 1), (30.0, 1, 2),
    (36.0, 2, 0), (-24.0, 2, 1),
];

pub(crate) const M11_B01: &[Term] = &[
    (10.0, 0, 0), (-10.0, 0, 1), (4.0, 0, 2), (31.0, 1, 0), (-25.0, 1, 1), (4.0, 1, 2),
    (33.0, 2, 0), (-15.0, 2, 1), (12.0, 3, 0),
];

pub(crate) const M11_B11: &[Term] = &[
    (-2.0, 0, 0), (2.0, 0, 1), (4.0, 0, 2), (-5.0, 1, 0), (-1.0, 1, 1), (4.0, 1, 2),
    (-3.0, 2, 0), (-3.0, 2, 1),
];

pub(crate) const M12_A10: &[Term] = &[
    (1540.0, 0, 0), (-2800.0, 0, 1), (2212.0, 0, 2), (-1112.0, 0, 3), (752.0, 0, 4),
    (-800.0, 0, 5), (7140.0, 1, 0), (-11592.0, 1, 1), (8628.0, 1, 2), (-5232.0, 1, 3),
    (4272.0, 1, 4), (13041.0, 2, 0), (-18072.0, 2, 1), (12213.0, 2, 2), (-7938.0, 2, 3),
    (11448.0, 3, 0), (-12024.0, 3, 1), (6192.0, 3, 2), (4320.0, 4, 0), (-1728.0, 4, 1),
];

pub(crate) const M12_B01: &[Term] = &[
    (1540.0, 0, 0), (-3080.0, 0, 1), (2772.0, 0, 2), (-1424.0, 0, 3), (400.0, 0, 4),
    (7000.0, 1, 0), (-12152.0, 1, 1), (9144.0, 1, 2), (-3560.0, 1, 3), (400.0, 1, 4),
    (12621.0, 2, 0), (-18102.0, 2, 1), (10341.0, 2, 2), (-2136.0, 2, 3), (11265.0, 3, 0),
    (-12126.0, 3, 1), (3969.0, 3, 2), (4968.0, 4, 0), (-3096.0, 4, 1), (864.0, 5, 0),
];

pub(crate) const M12_B11: &[Term] = &[
    (-140.0, 0, 0), (280.0, 0, 1), (-156.0, 0, 2), (-176.0, 0, 3), (400.0, 0, 4),
    (-560.0, 1, 0), (856.0, 1, 1), (-48.0, 1, 2), (-1064.0, 1, 3), (400.0, 1, 4),
    (-843.0, 2, 0), (786.0, 2, 1), (741.0, 2, 2), (-888.0, 2, 3), (-567.0, 3, 0), (66.0, 3, 1),
    (633.0, 3, 2), (-144.0, 4, 0), (-144.0, 4, 1),
];

pub(crate) const M13_A10: &[Term] = &[
    (3403400.0, 0, 0), (-9809800.0, 0, 1), (13093080.0, 0, 2), (-10776920.0, 0, 3),
    (6439744.0, 0, 4), (-3527040.0, 0, 5), (2181248.0, 0, 6), (-1157248.0, 0, 7),
    (20720700.0, 1, 0), (-54234180.0, 1, 1), (65571660.0, 1, 2), (-49682268.0, 1, 3),
    (29027880.0, 1, 4), (-16296336.0, 1, 5), (8011296.0, 1, 6), (53243190.0, 2, 0),
    (-123735150.0, 2, 1), (131934978.0, 2, 2), (-89408610.0, 2, 3), (48498336.0, 2, 4),
    (-22072536.0, 2, 5), (74334645.0, 3, 0), (-147900519.0, 3, 1), (132380865.0, 3, 2),
    (-74879613.0, 3, 3), (31232358.0, 3, 4), (60023916.0, 4, 0), (-95460120.0, 4, 1),
    (63998532.0, 4, 2), (-24061752.0, 4, 3), (27002160.0, 5, 0), (-28946160.0, 5, 1),
    (9603360.0, 5, 2), (5443200.0, 6, 0), (-1555200.0, 6, 1),
];

pub(crate) const M13_B01: &[Term] = &[
    (3403400.0, 0, 0), (-10210200.0, 0, 1), (14294280.0, 0, 2), (-12236840.0, 0, 3),
    (6994704.0, 0, 4), (-2670432.0, 0, 5), (578624.0, 0, 6), (20520500.0, 1, 0),
    (-55435380.0, 1, 1), (68750220.0, 1, 2), (-50838668.0, 1, 3), (23948688.0, 1, 4),
    (-6676080.0, 1, 5), (578624.0, 1, 6), (52342290.0, 2, 0), (-124428150.0, 2, 1),
    (132320538.0, 2, 2), (-80216802.0, 2, 3), (27990252.0, 2, 4), (-4005648.0, 2, 5),
    (73011015.0, 3, 0), (-147574179.0, 3, 1), (127552185.0, 3, 2), (-57231153.0, 3, 3),
    (11036268.0, 3, 4), (59911461.0, 4, 0), (-97355817.0, 4, 1), (61718463.0, 4, 2),
    (-15616179.0, 4, 3), (28754676.0, 5, 0), (-33786288.0, 5, 1), (12030876.0, 5, 2),
    (7406640.0, 6, 0), (-4801680.0, 6, 1), (777600.0, 7, 0),
];

pub(crate) const M13_B11: &[Term] = &[
    (-200200.0, 0, 0), (600600.0, 0, 1), (-729960.0, 0, 2), (277480.0, 0, 3), (428304.0, 0, 4),
    (-801312.0, 0, 5), (578624.0, 0, 6), (-1101100.0, 1, 0), (2832060.0, 1, 1),
    (-2606100.0, 1, 2), (-162908.0, 1, 3), (2859888.0, 1, 4), (-2937840.0, 1, 5),
    (578624.0, 1, 6), (-2501730.0, 2, 0), (5227110.0, 2, 1), (-2873682.0, 2, 2),
    (-2954142.0, 2, 3), (5511852.0, 2, 4), (-2136528.0, 2, 5), (-2998485.0, 3, 0),
    (4599261.0, 3, 1), (-158355.0, 3, 2), (-4675833.0, 3, 3), (3080268.0, 3, 4),
    (-1992519.0, 4, 0), (1745523.0, 4, 1), (1575963.0, 4, 2), (-2162079.0, 4, 3),
    (-692064.0, 5, 0), (44712.0, 5, 1), (736776.0, 5, 2), (-97200.0, 6, 0), (-97200.0, 6, 1),
];
