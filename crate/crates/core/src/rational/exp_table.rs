// Generated by tools/gen_exp_table.py; do not edit.

pub(crate) type Pairs = &'static [(f64, f64)];

/// (poles, halved coefficients) per K, as (re, im) pairs.
pub(crate) const EXP_NEG: &[(Pairs, Pairs)] = &[
    // K = 1
    (&[(-0.5850515606551416, -1.1858472517236682)],
     &[(-0.33812819966277974, 1.6195733880709138)]),
    // K = 2
    (&[(0.36783831439986897, -3.6581332720632984), (-1.5484005705394066, -1.1918258539276156)],
     &[(-0.14678443297462285, -0.9000103568686952), (0.12336676287801558, 3.810119784497827)]),
    // K = 3
    (&[(1.781988275922151, -6.196512467347257), (-1.1585525717180971, -3.6147726008197254), (-2.400602938931979, -1.1931293084021055)],
     &[(0.1671632486640957, 0.212858478329704), (-1.326013593159965, -2.9028257691087043), (1.15802583223133, 8.573777353370474)]),
    // K = 4
    (&[(3.4085395014617514, -8.773034564408121), (-0.26949098736741733, -6.0820325927001075), (-2.2922491478210967, -3.6007714960770945), (-3.220945245054342, -1.1936196054193298)],
     &[(-0.056259516609432625, -0.023154769613901026), (1.2651761103730272, 0.8878461937178651), (-4.8724814375457886, -7.433511269221317), (3.6635433918337172, 19.05121629821473)]),
    // K = 5
    (&[(5.161191251645805, -11.375156254838123), (0.8944046821711605, -8.582756902506212), (-1.7154060337875, -6.038934929043291), (-3.283752900098784, -3.5943867748122624), (-4.027732483729833, -1.193856067333312)],
     &[(0.011569807948257982, -0.0013717013300001304), (-0.5451739714475466, -0.028423456691056993), (5.131169994684731, 2.4327714700606617), (-14.234330415879406, -17.63906664467784), (9.636764114982858, 42.10919519807949)]),
    // K = 6
    (&[(6.998687356007682, -13.995916098133241), (2.2359676498896834, -11.109295737043418), (-0.8517077580003192, -8.503832410628911), (-2.9178692532255934, -6.017345628905562), (-4.206124927739347, -3.5909205906678743), (-4.827494174587594, -1.19398793770884)],
     &[(-0.0016368672970324628, 0.0011627086693936821), (0.13714303402429215, -0.07683827746720519), (-2.63882465004102, 0.36704841353663853), (16.476524502748944, 5.5923819912074135), (-37.5719864535966, -40.47459214863925), (23.598780424963298, 92.82333241774936)]),
    // K = 7
    (&[(8.897735413180197, -16.630935208424827), (3.7032391601781884, -13.656333463712347), (0.20872377764756553, -10.991232026330678), (-2.269816525854417, -8.461717806879609), (-3.99340042964899, -6.004818060140396), (-5.0893745648738005, -3.5888160956024366), (-5.623171534758011, -1.1940664287007021)],
     &[(0.00014307756522003064, -0.0002872380342221495), (-0.018877441152315565, 0.03437147263854954), (0.7527267346501203, -0.6704093663639792), (-9.614466617509581, 2.6422244062392366), (46.997958838047275, 11.616438417333145), (-93.86980917494199, -91.28908767825325), (55.75232458317473, 204.30001258482733)]),
    // K = 8
    (&[(10.823477773031465, -19.28850304438351), (5.248999134432569, -16.230183380118596), (1.4006174319316378, -13.505837945478946), (-1.4311509492914047, -10.931598701978169), (-3.5200170602850958, -8.440745872127263), (-5.003623134873586, -5.999953382825434), (-5.958367462135158, -3.589227090645853), (-6.42629749843236, -1.1946999205218296)],
     &[(5.088584010297809e-07, 4.9416564848664026e-05), (-0.00034623521017091455, -0.008920194733257123), (-0.08551519766661352, 0.3184326857124354), (3.0142359947840123, -3.562770516018249), (-30.506005750216428, 11.508337879446126), (126.3384431955516, 22.970620324430552), (-228.90458948359907, -206.44193177400263), (130.1437769674954, 454.04200539096166)]),
];
