// Generated by tests/oracle/benchfns_oracle.py; do not edit by hand.

#[rustfmt::skip]
pub const GOLDENS: &[(&str, &[f64], f64)] = &[
    ("franke", &[0.0, 0.0], 0.7664205912849231),
    ("franke", &[0.5, 0.5], 0.3257620892806842),
    ("franke", &[1.0, 1.0], 0.03586959238610449),
    ("franke", &[0.8672458157012182, 0.870176409209838], 0.06497025671280549),
    ("franke", &[0.5538873062626128, 0.43226977766536134], 0.4030990336927512),
    ("franke", &[0.20992881574037392, 0.6765935415057024], 0.32178588944507047),
    ("franke", &[0.667138095002498, 0.2216735020075299], 0.5210291509161379),
    ("franke", &[0.9031572542922927, 0.7229487342973273], 0.08145726279505316),
    ("franke", &[0.9131150577068702, 0.8974922157514986], 0.05396907468228995),
    ("franke", &[0.8818865814852169, 0.8911484864473105], 0.06035989981012817),
    ("hartman3", &[0.0, 0.0, 0.0], -0.06797411659013464),
    ("hartman3", &[0.5, 0.5, 0.5], -0.6280220150705937),
    ("hartman3", &[1.0, 1.0, 1.0], -0.3004760740554008),
    ("hartman3", &[0.8761219826373975, 0.6698135879756739, 0.7352182302185413], -2.086796454495226),
    ("hartman3", &[0.6812188091696423, 0.7923474188517323, 0.20191412218933902], -0.03203320891653015),
    ("hartman3", &[0.29438261561378476, 0.5711278939583169, 0.34046318817593035], -0.3839326649263273),
    ("hartman3", &[0.9403890599278744, 0.13669829863617788, 0.5001500711605964], -0.13350039077507908),
    ("hartman3", &[0.33905765828808376, 0.989612695458629, 0.597215806829282], -2.176293110307326),
    ("hartman3", &[0.4108624252295403, 0.12056427098881728, 0.9724996246986323], -0.3774673995329136),
    ("hartman3", &[0.5849098713792892, 0.45126493913498833, 0.22564430502130106], -0.28003979013906216),
    ("friedman5", &[0.0, 0.0, 0.0, 0.0, 0.0], 5.0),
    ("friedman5", &[0.5, 0.5, 0.5, 0.5, 0.5], 14.571067811865476),
    ("friedman5", &[1.0, 1.0, 1.0, 1.0, 1.0], 20.0),
    ("friedman5", &[0.6556502413132472, 0.8303230529625382, 0.6469493451585215, 0.7393937304042079, 0.6083918339224119], 20.77064699185826),
    ("friedman5", &[0.6117487805135848, 0.22983857791703544, 0.9207427394199503, 0.5057537053602535, 0.2437422918479052], 14.091677041213467),
    ("friedman5", &[0.8793718221705434, 0.6805165116788814, 0.5485077637684135, 0.7641239926764776, 0.6270897561964907], 20.34946808625099),
    ("friedman5", &[0.919406178385015, 0.7573361246863453, 0.4501106020569944, 0.8198658383466018, 0.12191282152320249], 17.015955783284074),
    ("friedman5", &[0.07863358729871905, 0.16002799364882225, 0.07331438147126879, 0.9953225673817063, 0.5180660410188972], 16.579989932508532),
    ("friedman5", &[0.19443810693867025, 0.27772762314098676, 0.061981990967703626, 0.9710324355446419, 0.6058696372666182], 18.26522831634822),
    ("friedman5", &[0.764366060448424, 0.8925368496299134, 0.11587232166490047, 0.30236831661782626, 0.20917958865410113], 15.426283454226288),
    ("gramacylee6", &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1.0002264053176766),
    ("gramacylee6", &[0.5, 0.5, 0.5, 0.5, 0.5, 0.5], 2.0745295369682015),
    ("gramacylee6", &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 2.3849322328744504),
    ("gramacylee6", &[0.05727931900449934, 0.8118366309809822, 0.821439766121922, 0.7642134371348697, 0.2722652226848402, 0.38153577683199413], 2.4317874918355713),
    ("gramacylee6", &[0.8895647982102105, 0.5952890305751602, 0.03385229674247037, 0.037445955318292534, 0.1994354965289672, 0.25671233895687007], 2.698032477569933),
    ("gramacylee6", &[0.18289365567668003, 0.9706795298154606, 0.9614803356487635, 0.14722486750107566, 0.5712296427266004, 0.860258059968226], 2.08624346001723),
    ("gramacylee6", &[0.24413945620182487, 0.12828893025464005, 0.3060066236875927, 0.22767340809759296, 0.8872370945713773, 0.7231702045986638], 1.2808506525591348),
    ("gramacylee6", &[0.8997211257843202, 0.31391595095566116, 0.7174471155117051, 0.42068093025690767, 0.7715633724461054, 0.02981682806530661], 2.562563279770049),
    ("gramacylee6", &[0.881910218323513, 0.8607975889839139, 0.8292298187205214, 0.4993367204926168, 0.14339921382298382, 0.40327107825160047], 3.8779787686925338),
    ("gramacylee6", &[0.5779328662836503, 0.030344924472313073, 0.47508962816451683, 0.23128781847095725, 0.022880477083363493, 0.043420926182062614], 2.0224786422453525),
    ("otl", &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 5.055138588912886),
    ("otl", &[0.5, 0.5, 0.5, 0.5, 0.5, 0.5], 5.310616942188329),
    ("otl", &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 5.4519642062149405),
    ("otl", &[0.4559016092550725, 0.8558397824844678, 0.9458798609456043, 0.717206239867672, 0.9889388703665845, 0.7605986984711661], 6.530101571012441),
    ("otl", &[0.7012700910104176, 0.46588833842364896, 0.6404750375401325, 0.06728241293901005, 0.40801340245021733, 0.16041138214714767], 5.283312194591864),
    ("otl", &[0.11976033744293568, 0.34359712102603246, 0.2792388900343896, 0.9201428208371948, 0.24574952395218097, 0.04167691443011601], 5.861348959564326),
    ("otl", &[0.07282576206351832, 0.6542319545715757, 0.6550641888697004, 0.38727445371270564, 0.19740442212495113, 0.3917060424425358], 7.5218495707789765),
    ("otl", &[0.7072087283291694, 0.40354602948187146, 0.7274598101769832, 0.08840106770146627, 0.7262663132570871, 0.5797029441948554], 5.212535301076673),
    ("otl", &[0.07855766686338983, 0.35474024022512574, 0.62785840000393, 0.2891579156086638, 0.192101699257755, 0.7337011936333868], 6.69056670508836),
    ("otl", &[0.2826676201124272, 0.9800294194804464, 0.5683710224351938, 0.013187584114643824, 0.05487936626031087, 0.10722258547951913], 7.544952266130144),
    ("piston", &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 0.46700283916057495),
    ("piston", &[0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5], 0.4643970224718025),
    ("piston", &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0], 0.43476797627910463),
    ("piston", &[0.6400442151588257, 0.6587243878553453, 0.7899931425034642, 0.059875019718618416, 0.38354362727760394, 0.22091560209787298, 0.3512719702451581], 0.497373542895468),
    ("piston", &[0.5750184388701532, 0.6500551702491457, 0.7064133823795006, 0.45176159570761165, 0.7467373680967215, 0.4083126961799347, 0.10657189121632415], 0.46666663822322846),
    ("piston", &[0.3299774138528706, 0.5177730213970304, 0.5093008106214234, 0.4105811762251108, 0.0030723012046373066, 0.26520903581223243, 0.8470908800993731], 0.4578349525452254),
    ("piston", &[0.1996087918525633, 0.5606977559648617, 0.5919006471343984, 0.5099626088787336, 0.5580099777267727, 0.549811286269165, 0.6136062901693278], 0.4323907316805761),
    ("piston", &[0.9549722678693415, 0.8601511905260097, 0.11823498082922379, 0.17789305194033722, 0.8598783857602754, 0.02532818069675158, 0.6775078493283297], 0.25704912009462605),
    ("piston", &[0.9958810718128782, 0.8584543615366629, 0.2387040241881736, 0.686239105814018, 0.6878699745129069, 0.018976976462029116, 0.8719940075896246], 0.3048807366544468),
    ("piston", &[0.43189928880168693, 0.9083913724401221, 0.5348936567130017, 0.5650558017679644, 0.7145331690187209, 0.01842744696405907, 0.5019363155099564], 0.3476342325250887),
];
