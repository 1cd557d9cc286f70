"""Default noun list for anonymous aliases ("Anonymous Kangaroo", ...)."""

DEFAULT_ALIAS_NOUNS = [
    "Kangaroo", "Goose", "Kiwi", "Tui", "Kea", "Falcon", "Heron", "Dolphin",
    "Penguin", "Albatross", "Gecko", "Weta", "Stoat", "Possum", "Wallaby",
    "Echidna", "Wombat", "Quokka", "Kakapo", "Moa", "Otter", "Badger",
    "Beaver", "Marmot", "Lynx", "Ocelot", "Puffin", "Plover", "Sandpiper",
    "Gannet", "Petrel", "Skink", "Tuatara", "Snapper", "Trevally", "Gurnard",
    "Kahawai", "Tarakihi", "Hoki", "Warehou", "Orca", "Seal", "Walrus",
    "Narwhal", "Beluga", "Ibis", "Egret", "Bittern", "Dotterel", "Fantail",
    "Silvereye", "Warbler", "Rifleman", "Saddleback", "Kokako", "Takahe",
    "Pukeko", "Weka", "Morepork", "Harrier",
]
