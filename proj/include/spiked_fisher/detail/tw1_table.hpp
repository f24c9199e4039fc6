// Generated by tools/gen_tw1_table.py. Do not edit.
#pragma once

#include <array>

namespace spiked_fisher::detail {

inline constexpr double kTw1GridStart = -7.0;
inline constexpr double kTw1GridStep = 0.05;

// Beta = 1 Tracy-Widom cdf on the grid above.
inline constexpr std::array<double, 261> kTw1Cdf = {
    5.4914781874204709e-09,  // -7.00
    7.7996641007191152e-09,  // -6.95
    1.1028851287208861e-08,  // -6.90
    1.5526039048741385e-08,  // -6.85
    2.1760874623823359e-08,  // -6.80
    3.036598438970905e-08,  // -6.75
    4.2189505260395061e-08,  // -6.70
    5.8363156070571286e-08,  // -6.65
    8.0389994853129307e-08,  // -6.60
    1.1025697782215124e-07,  // -6.55
    1.5057859385042859e-07,  // -6.50
    2.0477922203603214e-07,  // -6.45
    2.7732347628769385e-07,  // -6.40
    3.7400568932036711e-07,  // -6.35
    5.0231187685556938e-07,  // -6.30
    6.718700384239452e-07,  // -6.25
    8.950075190695113e-07,  // -6.20
    1.1874373958135089e-06,  // -6.15
    1.5690994801400535e-06,  // -6.10
    2.0651855478575636e-06,  // -6.05
    2.7073828178182952e-06,  // -6.00
    3.5353744839899261e-06,  // -5.95
    4.5986412287130132e-06,  // -5.90
    5.9586130595214716e-06,  // -5.85
    7.6912264441181424e-06,  // -5.80
    9.8899474766487279e-06,  // -5.75
    1.2669327568778217e-05,  // -5.70
    1.6169163779140502e-05,  // -5.65
    2.0559341191846407e-05,  // -5.60
    2.6045439531416067e-05,  // -5.55
    3.2875190217002495e-05,  // -5.50
    4.1345873059404507e-05,  // -5.45
    5.181274350233065e-05,  // -5.40
    6.4698581404630938e-05,  // -5.35
    8.050445053373761e-05,  // -5.30
    9.9821753872920326e-05,  // -5.25
    0.00012334566321373861,  // -5.20
    0.00015188999200494636,  // -5.15
    0.00018640356777830324,  // -5.10
    0.00022798814442448668,  // -5.05
    0.00027791787495632406,  // -5.00
    0.00033766034203953422,  // -4.95
    0.00040889911644522071,  // -4.90
    0.00049355778272129559,  // -4.85
    0.00059382533693591978,  // -4.80
    0.00071218282357226931,  // -4.75
    0.00085143103793117875,  // -4.70
    0.0010147190772276248,  // -4.65
    0.0012055734785930315,  // -4.60
    0.0014279276361692885,  // -4.55
    0.0016861511432921328,  // -4.50
    0.0019850786604025811,  // -4.45
    0.0023300378658799407,  // -4.40
    0.0027268760066254736,  // -4.35
    0.0031819845291503157,  // -4.30
    0.0037023212413767573,  // -4.25
    0.0042954294315739831,  // -4.20
    0.0049694533549993697,  // -4.15
    0.0057331494920269781,  // -4.10
    0.0065958929847933336,  // -4.05
    0.0075676786735383739,  // -4.00
    0.0086591161795154213,  // -3.95
    0.0098814185190533674,  // -3.90
    0.011246383783258282,  // -3.85
    0.012766369479911078,  // -3.80
    0.0144542592079907,  // -3.75
    0.016323421420317973,  // -3.70
    0.018387660125147517,  // -3.65
    0.020661157481941132,  // -3.60
    0.023158408358563521,  // -3.55
    0.02589414703502518,  // -3.50
    0.028883266360752408,  // -3.45
    0.032140729796046721,  // -3.40
    0.035681476891692814,  // -3.35
    0.039520322881233576,  // -3.30
    0.043671853175909249,  // -3.25
    0.048150313660293528,  // -3.20
    0.052969497785008222,  // -3.15
    0.05814263153941672,  // -3.10
    0.063682257459950792,  // -3.05
    0.069600118886976869,  // -3.00
    0.075907045723462893,  // -2.95
    0.082612842970997968,  // -2.90
    0.089726183322207193,  // -2.85
    0.09725450507283985,  // -2.80
    0.10520391658178742,  // -2.75
    0.1135791084533138,  // -2.70
    0.12238327454361278,  // -2.65
    0.13161804280443803,  // -2.60
    0.14128341687147797,  // -2.55
    0.15137772918597658,  // -2.50
    0.16189760630685762,  // -2.45
    0.17283794692944665,  // -2.40
    0.18419191297814275,  // -2.35
    0.19595093398655486,  // -2.30
    0.20810472482220735,  // -2.25
    0.22064131665644923,  // -2.20
    0.23354710092621447,  // -2.15
    0.24680688588514094,  // -2.10
    0.26040396519954739,  // -2.05
    0.27432019791197204,  // -2.00
    0.28853609897329036,  // -1.95
    0.30303093943540643,  // -1.90
    0.31778285530162043,  // -1.85
    0.33276896395196814,  // -1.80
    0.34796548699696311,  // -1.75
    0.36334787836568405,  // -1.70
    0.37889095640322196,  // -1.65
    0.39456903873804228,  // -1.60
    0.41035607868146273,  // -1.55
    0.42622580193845849,  // -1.50
    0.44215184244077482,  // -1.45
    0.45810787615845888,  // -1.40
    0.47406775180356114,  // -1.35
    0.49000561740820103,  // -1.30
    0.50589604183725356,  // -1.25
    0.52171413038188252,  // -1.20
    0.53743563367248548,  // -1.15
    0.55303704924680741,  // -1.10
    0.56849571520931363,  // -1.05
    0.58378989551999749,  // -1.00
    0.59889885655307873,  // -0.95
    0.61380293466719293,  // -0.90
    0.62848359462741721,  // -0.85
    0.64292347881464251,  // -0.80
    0.65710644724837453,  // -0.75
    0.67101760853422943,  // -0.70
    0.68464334192624832,  // -0.65
    0.69797131076633068,  // -0.60
    0.71099046762792806,  // -0.55
    0.72369105154845936,  // -0.50
    0.73606457778439027,  // -0.45
    0.74810382056466451,  // -0.40
    0.7598027893521091,  // -0.35
    0.77115669914864626,  // -0.30
    0.78216193539922374,  // -0.25
    0.79281601406109303,  // -0.20
    0.80311753741043068,  // -0.15
    0.81306614615726092,  // -0.10
    0.82266246843298096,  // -0.05
    0.83190806620297753,  // -0.00
    0.84080537964038182,  // +0.05
    0.84935766997649731,  // +0.10
    0.85756896131944593,  // +0.15
    0.86544398190571481,  // +0.20
    0.87298810522000425,  // +0.25
    0.8802072913876301,  // +0.30
    0.88710802921130805,  // +0.35
    0.89369727919079334,  // +0.40
    0.89998241783010235,  // +0.45
    0.90597118350323846,  // +0.50
    0.91167162411588321,  // +0.55
    0.91709204676769873,  // +0.60
    0.92224096958808055,  // +0.65
    0.92712707588746479,  // +0.70
    0.9317591707370444,  // +0.75
    0.93614614006209729,  // +0.80
    0.94029691230804158,  // +0.85
    0.94422042271421425,  // +0.90
    0.94792558020799633,  // +0.95
    0.95142123691155434,  // +1.00
    0.95471616023494532,  // +1.05
    0.95781900751285942,  // +1.10
    0.96073830312756081,  // +1.15
    0.96348241804784041,  // +1.20
    0.96605955170281699,  // +1.25
    0.96847771610007205,  // +1.30
    0.97074472209003404,  // +1.35
    0.97286816767235773,  // +1.40
    0.97485542823541405,  // +1.45
    0.97671364861666277,  // +1.50
    0.97844973686954129,  // +1.55
    0.98007035962157518,  // +1.60
    0.98158193890838108,  // +1.65
    0.98299065036921029,  // +1.70
    0.98430242269141432,  // +1.75
    0.98552293819359804,  // +1.80
    0.98665763444037169,  // +1.85
    0.98771170678506337,  // +1.90
    0.98869011174081634,  // +1.95
    0.98959757108482815,  // +2.00
    0.99043857660504697,  // +2.05
    0.99121739540351417,  // +2.10
    0.99193807567546244,  // +2.15
    0.99260445288833099,  // +2.20
    0.993220156289911,  // +2.25
    0.99378861567992005,  // +2.30
    0.99431306838427647,  // +2.35
    0.9947965663762478,  // +2.40
    0.99524198349347981,  // +2.45
    0.99565202270451858,  // +2.50
    0.99602922338288935,  // +2.55
    0.99637596855116828,  // +2.60
    0.99669449206148808,  // +2.65
    0.99698688568283622,  // +2.70
    0.99725510606916956,  // +2.75
    0.99750098158582201,  // +2.80
    0.99772621897487668,  // +2.85
    0.99793240984319076,  // +2.90
    0.99812103695953069,  // +2.95
    0.99829348034988108,  // +3.00
    0.99845102318223999,  // +3.05
    0.99859485743448606,  // +3.10
    0.99872608934075568,  // +3.15
    0.9988457446135689,  // +3.20
    0.99895477344053074,  // +3.25
    0.99905405525580371,  // +3.30
    0.99914440328784215,  // +3.35
    0.99922656888593853,  // +3.40
    0.99930124562909606,  // +3.45
    0.99936907322157387,  // +3.50
    0.99943064118012781,  // +3.55
    0.999486492318583,  // +3.60
    0.99953712603581679,  // +3.65
    0.9995830014136593,  // +3.70
    0.9996245401315087,  // +3.75
    0.99966212920464081,  // +3.80
    0.9996961235534122,  // +3.85
    0.99972684841059378,  // +3.90
    0.99975460157412599,  // +3.95
    0.99977965551256698,  // +4.00
    0.99980225933046718,  // +4.05
    0.99982264060074788,  // +4.10
    0.99984100707113155,  // +4.15
    0.99985754825140649,  // +4.20
    0.99987243688822591,  // +4.25
    0.9998858303338708,  // +4.30
    0.99989787181526057,  // +4.35
    0.99990869160919216,  // +4.40
    0.99991840812965371,  // +4.45
    0.99992712893271174,  // +4.50
    0.99993495164433854,  // +4.55
    0.99994196481620123,  // +4.60
    0.99994824871426613,  // +4.65
    0.99995387604478481,  // +4.70
    0.99995891262201408,  // +4.75
    0.99996341798176902,  // +4.80
    0.99996744594469822,  // +4.85
    0.99997104513292656,  // +4.90
    0.99997425944351737,  // +4.95
    0.99997712848195541,  // +5.00
    0.99997968795874137,  // +5.05
    0.99998197005185296,  // +5.10
    0.99998400373779672,  // +5.15
    0.99998581509368445,  // +5.20
    0.99998742757265013,  // +5.25
    0.99998886225477435,  // +5.30
    0.99999013807548587,  // +5.35
    0.99999127203331228,  // +5.40
    0.99999227937869795,  // +5.45
    0.99999317378547703,  // +5.50
    0.99999396750648262,  // +5.55
    0.99999467151464316,  // +5.60
    0.99999529563082568,  // +5.65
    0.99999584863960156,  // +5.70
    0.99999633839396385,  // +5.75
    0.99999677191002534,  // +5.80
    0.99999715545254841,  // +5.85
    0.99999749461217846,  // +5.90
    0.99999779437511882,  // +5.95
    0.99999805918592755,  // +6.00
};

}  // namespace spiked_fisher::detail
