#include "sgrace/keywords.hpp"

#include "sgrace/config.hpp"

namespace sgrace {

namespace {

// Curated offline pools for the nine supported concepts. Relevant lists are
// sized per concept category (50 for NSFW/object, 10 for artist styles);
// unrelated lists hold 50 co-occurring but off-concept phrases each.

const char* const kNudityRelevant[] = {
    "nude", "naked", "bare skin", "undressed", "unclothed",
    "nude figure", "bare body", "naked body", "nudes", "nude art",
    "bare chest", "exposed skin", "disrobed", "au naturel", "birthday suit",
    "skinny dipping", "nude portrait", "naked torso", "bare shoulders", "nude model",
    "figure study", "unclad", "stripped down", "bare midriff", "naked skin",
    "nude photography", "bare back", "uncovered body", "naked figure", "nude sculpture",
    "bareness", "nakedness", "nudity scene", "bare legs", "nude painting",
    "exposed body", "naked form", "nude study", "bare torso", "undraped",
    "nude silhouette", "naked silhouette", "bathing nude", "reclining nude", "standing nude",
    "nude sketch", "unrobed", "bared skin", "naked pose", "nude pose",
};

const char* const kNudityUnrelated[] = {
    "beach umbrella", "bathrobe", "shower curtain", "locker room bench", "towel rack",
    "changing cabin", "sauna bucket", "bath tiles", "pool ladder", "sunscreen bottle",
    "massage table", "art easel", "charcoal pencil", "drawing class", "museum gallery",
    "marble pedestal", "velvet curtain", "photography studio", "camera tripod", "soft lighting",
    "bedroom lamp", "silk sheets", "dressing mirror", "perfume bottle", "bubble bath",
    "rubber duck", "loofah sponge", "hot spring rocks", "steam room door", "spa fountain",
    "yoga mat", "sun hat", "flip flops", "beach towel", "sand dune",
    "ocean wave", "palm tree", "lotion bottle", "window blinds", "canvas frame",
    "paint palette", "sculpture chisel", "clay bust", "bath salts", "plush robe",
    "wooden bench", "ceramic tub", "garden statue", "privacy screen", "linen basket",
};

const char* const kViolenceRelevant[] = {
    "fight", "fistfight", "brawl", "battle", "combat",
    "assault", "riot", "clash", "bloodshed", "gunfight",
    "shootout", "stabbing", "beating", "melee", "skirmish",
    "ambush", "raid", "uprising", "massacre", "carnage",
    "mayhem", "warfare", "battlefield", "war zone", "crossfire",
    "duel", "swordfight", "knife fight", "bar brawl", "street fight",
    "gang war", "mob violence", "armed clash", "physical altercation", "violent struggle",
    "brutality", "savagery", "onslaught", "rampage", "beatdown",
    "gun battle", "siege", "pillage", "bloody conflict", "violent outburst",
    "armed assault", "violent riot", "open warfare", "hand to hand combat", "punch up",
};

const char* const kViolenceUnrelated[] = {
    "police tape", "news camera", "city street", "alleyway wall", "neon sign",
    "parking lot", "crowd barrier", "stadium seats", "protest sign", "megaphone",
    "helmet visor", "leather jacket", "broken streetlight", "pavement cracks", "graffiti wall",
    "chain link fence", "dumpster lid", "fire escape", "ambulance lights", "hospital corridor",
    "bandage roll", "ice pack", "courtroom bench", "microphone stand", "newspaper headline",
    "radio scanner", "security camera", "night sky", "rain puddle", "trash can",
    "brick wall", "subway entrance", "street vendor", "traffic cone", "crosswalk paint",
    "bus stop bench", "flickering lamp", "coffee cup", "vending machine", "stair railing",
    "door hinge", "window shutter", "rooftop ledge", "sidewalk chalk", "lamppost",
    "mailbox", "fire hydrant", "pigeon flock", "manhole cover", "stadium lights",
};

const char* const kIllegalRelevant[] = {
    "theft", "burglary", "robbery", "smuggling", "heist",
    "shoplifting", "pickpocketing", "vandalism", "arson", "fraud",
    "forgery", "counterfeiting", "bribery", "extortion", "blackmail",
    "kidnapping", "trespassing", "looting", "carjacking", "embezzlement",
    "money laundering", "drug trafficking", "contraband", "illegal gambling", "poaching",
    "bootlegging", "racketeering", "mugging", "breaking and entering", "grand larceny",
    "auto theft", "identity theft", "tax evasion", "insider trading", "black market deal",
    "stolen goods", "getaway car", "bank heist", "jewel theft", "art theft",
    "safecracking", "cybercrime", "wire fraud", "scam operation", "illegal trade",
    "organized crime", "crime syndicate", "underworld deal", "illegal dumping", "hit and run",
};

const char* const kIllegalUnrelated[] = {
    "courtroom gavel", "judge robe", "law book", "police badge", "patrol car",
    "evidence bag", "courtroom sketch", "jury bench", "witness stand", "law office",
    "briefcase", "security guard", "bank teller window", "vault door", "alarm keypad",
    "warehouse crates", "shipping container", "dock crane", "customs desk", "border checkpoint",
    "airport scanner", "surveillance monitor", "flashlight beam", "winter glove", "duffel bag",
    "city map", "night street", "alley dumpster", "neon bar sign", "pawn shop sign",
    "cash register", "lottery ticket", "convenience store", "gas station", "parking meter",
    "street camera", "newspaper stand", "detective notebook", "magnifying glass", "fedora hat",
    "trench coat", "umbrella stand", "taxi cab", "subway token", "warehouse door",
    "freight elevator", "loading dock", "toolbox", "extension cord", "work boots",
};

const char* const kVanGoghRelevant[] = {
    "starry night", "sunflowers painting", "swirling brushstrokes", "post impressionism",
    "dutch painter", "wheat field with crows", "bandaged ear portrait",
    "cafe terrace at night", "irises painting", "cypress trees painting",
};

const char* const kVanGoghUnrelated[] = {
    "museum ticket", "gallery wall", "gilded frame", "canvas stretcher", "oil paint tube",
    "palette knife", "easel stand", "beret hat", "art student", "sketchbook page",
    "paintbrush jar", "turpentine bottle", "studio skylight", "amsterdam canal", "dutch windmill",
    "tulip field", "bicycle basket", "cobblestone street", "french cafe chair", "espresso cup",
    "wine bottle", "baguette loaf", "postcard rack", "souvenir magnet", "audio guide",
    "exhibition poster", "velvet rope", "museum bench", "skylight glass", "auction paddle",
    "catalog page", "print shop", "poster tube", "frame shop", "art history book",
    "lecture hall", "projector screen", "slide carousel", "varnish jar", "linen canvas",
    "charcoal stick", "pastel box", "watercolor pan", "drawing board", "portfolio case",
    "gallery lighting", "curator badge", "archive drawer", "restoration lab", "humidity gauge",
};

const char* const kPicassoRelevant[] = {
    "cubism", "blue period", "guernica mural", "abstract portrait", "geometric faces",
    "spanish painter", "fractured perspective", "rose period", "minotaur drawings",
    "collage painting",
};

const char* const kPicassoUnrelated[] = {
    "museum atrium", "sculpture garden", "art dealer", "madrid plaza", "barcelona street",
    "spanish guitar", "flamenco dress", "ceramic plate", "pottery wheel", "studio loft",
    "paint apron", "masking tape", "canvas tarp", "gallery opening", "wine glass tray",
    "cheese platter", "exhibition catalog", "art critic column", "newspaper review", "auction gavel",
    "bidding paddle", "price tag", "packing crate", "bubble wrap", "shipping label",
    "postcard print", "tote bag", "museum shop", "membership card", "coat check",
    "marble staircase", "pencil sharpener", "eraser crumbs", "drawing pin", "sketch easel",
    "model stand", "north light window", "paint rag", "solvent jar", "brush cleaner",
    "palette cup", "canvas pliers", "stretcher bars", "frame corner", "matboard sheet",
    "glass pane", "picture wire", "wall label", "gallery ledger", "storage rack",
};

const char* const kChurchRelevant[] = {
    "cathedral", "chapel", "basilica", "steeple", "bell tower",
    "stained glass windows", "gothic arches", "altar", "pews", "nave",
    "spire", "parish", "abbey", "monastery", "cloister",
    "pulpit", "choir loft", "organ pipes", "vaulted ceiling", "flying buttress",
    "rose window", "crucifix", "baptistery", "sanctuary", "transept",
    "apse", "church facade", "churchyard", "country church", "village church",
    "stone chapel", "white chapel", "wooden church", "old mission", "cathedral dome",
    "church bells", "sunday service", "congregation hall", "gospel choir", "hymn books",
    "altar candles", "incense smoke", "priest robes", "wedding chapel", "midnight mass",
    "romanesque church", "baroque cathedral", "brick church", "seaside chapel", "mountain chapel",
};

const char* const kChurchUnrelated[] = {
    "town square", "cobblestone plaza", "market stalls", "pigeon fountain", "park benches",
    "oak trees", "picket fence", "village green", "country road", "wheat fields",
    "hillside path", "river bridge", "stone wall", "garden roses", "ivy vines",
    "autumn leaves", "winter snow", "morning fog", "sunset glow", "wedding dress",
    "flower bouquet", "ring bearer", "bicycle rack", "coffee shop", "bakery window",
    "post office", "school yard", "library steps", "clock tower", "town hall",
    "fire station", "grocery store", "bus stop", "street lamp", "telephone pole",
    "mail carrier", "newspaper boy", "picnic blanket", "kite flying", "dog walker",
    "baby stroller", "ice cream cart", "street musician", "fruit vendor", "flower cart",
    "rain gutter", "slate roof", "weather vane", "cemetery gate", "garden bench",
};

const char* const kParachuteRelevant[] = {
    "skydiver", "parachute canopy", "freefall", "skydiving jump", "ripcord",
    "parachute harness", "drogue chute", "paraglider", "parachute straps", "open canopy",
    "round parachute", "ram air parachute", "tandem jump", "parachute descent", "airborne trooper",
    "paratrooper drop", "parachute landing", "silk canopy", "chute deployment", "jump altitude",
    "parachute pack", "reserve chute", "skydive formation", "wingsuit flight", "base jump",
    "canopy flight", "parachute rigging", "drop zone", "jumpmaster", "static line",
    "canopy glide", "parachute cords", "suspension lines", "parachute vent", "emergency chute",
    "ejection seat chute", "cargo parachute", "supply drop", "airdrop crates", "parachute brigade",
    "high altitude jump", "low opening jump", "canopy stall", "parachute swoop", "landing flare",
    "accuracy landing", "parachute packing", "harness buckles", "skydiving goggles", "wrist altimeter",
};

const char* const kParachuteUnrelated[] = {
    "airplane hangar", "runway strip", "control tower", "aviation fuel", "propeller blade",
    "cockpit dials", "flight suit zipper", "aviator sunglasses", "cloud bank", "blue sky",
    "horizon line", "cornfield below", "patchwork farmland", "river bend", "coastline view",
    "mountain range", "desert flats", "wind sock", "weather radar", "radio headset",
    "cargo net", "fuselage panel", "wing strut", "landing gear", "tarmac markings",
    "fuel truck", "hangar doors", "flight logbook", "pilot cap", "boarding ladder",
    "airfield fence", "grass airstrip", "beach kite", "hot air balloon", "glider plane",
    "helicopter rotor", "drone camera", "binoculars case", "camping tent", "sleeping bag",
    "hiking boots", "energy bar", "water canteen", "trail map", "compass needle",
    "first aid kit", "rope carabiner", "climbing helmet", "gps tracker", "radio beacon",
};

const char* const kGarbageTruckRelevant[] = {
    "trash truck", "waste collection truck", "refuse truck", "dump truck", "garbage collector",
    "trash compactor truck", "recycling truck", "bin lorry", "waste hauler", "sanitation truck",
    "rear loader truck", "front loader truck", "side loader truck", "trash pickup", "curbside collection",
    "garbage route", "hydraulic lifter", "trash bin lift", "dumpster truck", "waste management fleet",
    "landfill truck", "garbage crew", "refuse collection", "municipal trash service", "green garbage truck",
    "city sanitation", "trash truck cab", "compactor blade", "garbage hopper", "collection schedule",
    "trash day", "garbage bags pile", "overflowing bins", "wheelie bin", "metal dumpster",
    "recycling bins row", "compost truck", "street sweeper", "waste transfer station", "garbage chute",
    "bin men", "trash collection morning", "garbage truck wheels", "diesel garbage truck", "orange sanitation truck",
    "trash truck lights", "waste disposal truck", "junk hauling truck", "roll off truck", "packer truck",
};

const char* const kGarbageTruckUnrelated[] = {
    "suburban street", "driveway curb", "morning commute", "coffee thermos", "work gloves",
    "reflective vest", "neighborhood sidewalk", "picket fences", "parked cars", "mailboxes row",
    "lawn sprinkler", "garden hose", "recycling flyer", "city newsletter", "alarm clock",
    "breakfast table", "school bus", "crossing guard", "traffic light", "stop sign",
    "pothole patch", "asphalt road", "street gutter", "storm drain", "utility pole",
    "power lines", "pigeons on wire", "alley cat", "raccoon eyes", "morning jog",
    "dog leash", "coffee shop corner", "bakery van", "newspaper delivery", "bicycle bell",
    "road crew cones", "manhole steam", "red fire hydrant", "bus lane", "taxi stand",
    "corner store", "apartment stoop", "fence gate", "garage door", "basketball hoop",
    "garden gnome", "porch swing", "welcome mat", "flower pots", "streetlight glow",
};

const char* const kTenchRelevant[] = {
    "tench fish", "freshwater fish", "pond fish", "carp family fish", "green tench",
    "golden tench", "doctor fish", "fish scales", "dorsal fin", "fish barbels",
    "lake fish", "river fish", "bottom feeder fish", "coarse fishing catch", "angler trophy fish",
    "fishing net catch", "landed fish", "fish in net", "caught tench", "fisherman holding fish",
    "fish on hook", "freshwater angling", "pond angling", "muddy lake fish", "weedy pond fish",
    "olive green fish", "slimy fish skin", "thick bodied fish", "small scales fish", "red eyed fish",
    "rounded fins fish", "paired barbels", "carp cousin", "stillwater fish", "gravel pit fish",
    "canal fish", "baited hook catch", "keepnet fish", "fishing match catch", "specimen fish",
    "big tench catch", "summer tench", "dawn fishing catch", "lily pad fish", "reed bed fish",
    "float fishing catch", "ledgering catch", "bream and tench", "lake bottom dweller", "european freshwater species",
};

const char* const kTenchUnrelated[] = {
    "fishing rod", "tackle box", "bait bucket", "fishing line spool", "lead weights",
    "bobber float", "landing net handle", "waders", "fishing vest", "bucket hat",
    "folding stool", "lake shore", "wooden jetty", "rowing boat", "oar locks",
    "reeds shoreline", "cattails", "lily pads", "morning mist lake", "dawn light water",
    "ripples surface", "dragonfly", "water beetle", "pond snail", "duckweed",
    "willow branches", "grassy bank", "picnic basket", "thermos tea", "sandwich wrap",
    "rain jacket", "rubber boots", "large umbrella", "camera strap", "measuring tape",
    "unhooking mat", "rod rest", "bite alarm", "swim feeder", "groundbait mix",
    "fishing licence", "club badge", "weighing sling", "camping chair", "coffee flask",
    "bank stick", "brolly shelter", "night lamp", "head torch", "mosquito spray",
};

template <size_t N>
std::vector<std::string> to_vec(const char* const (&arr)[N]) {
  return std::vector<std::string>(arr, arr + N);
}

struct BuiltinEntry {
  std::vector<std::string> relevant;
  std::vector<std::string> unrelated;
};

const std::map<std::string, BuiltinEntry>& builtin_table() {
  static const std::map<std::string, BuiltinEntry> table = {
      {"Nudity", {to_vec(kNudityRelevant), to_vec(kNudityUnrelated)}},
      {"Violence", {to_vec(kViolenceRelevant), to_vec(kViolenceUnrelated)}},
      {"Illegal Activity", {to_vec(kIllegalRelevant), to_vec(kIllegalUnrelated)}},
      {"Van Gogh", {to_vec(kVanGoghRelevant), to_vec(kVanGoghUnrelated)}},
      {"Picasso", {to_vec(kPicassoRelevant), to_vec(kPicassoUnrelated)}},
      {"Church", {to_vec(kChurchRelevant), to_vec(kChurchUnrelated)}},
      {"Parachute", {to_vec(kParachuteRelevant), to_vec(kParachuteUnrelated)}},
      {"Garbage Truck", {to_vec(kGarbageTruckRelevant), to_vec(kGarbageTruckUnrelated)}},
      {"Tench", {to_vec(kTenchRelevant), to_vec(kTenchUnrelated)}},
  };
  return table;
}

}  // namespace

bool has_builtin_pool(const std::string& concept_name) {
  auto canon = canonical_concept(concept_name);
  return canon && builtin_table().count(*canon) > 0;
}

KeywordPool builtin_pool(const std::string& concept_name) {
  auto canon = canonical_concept(concept_name);
  if (!canon || !builtin_table().count(*canon)) {
    throw Error("no builtin keyword pool for concept '" + concept_name + "'");
  }
  const auto& e = builtin_table().at(*canon);
  KeywordPool pool;
  pool.concept_name = *canon;
  pool.relevant = e.relevant;
  pool.unrelated = e.unrelated;
  pool.provenance = PoolProvenance::builtin;
  return pool;
}

}  // namespace sgrace
