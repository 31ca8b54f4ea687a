"""Regenerates the shipped test fixtures. Band TIFFs are written with
Pillow so the decoder is tested against an independent writer."""
import json
import pathlib

from PIL import Image

HERE = pathlib.Path(__file__).resolve().parent

# Published areas and centroids.
RECORDS = [
    ("LT50080662008129CUB00", 2008, "Pelagatos", 1.7739, -8.179486595, -77.79499326),
    ("LT50080662008129CUB00", 2008, "Paron", 1.4724, -8.993284653, -77.66900783),
    ("LT50080672007142CUB00", 2007, "Qerocha", 1.3851, -9.717370767, -77.32451465),
    ("LT50080662009179CUB00", 2009, "Pelagatos", 1.9953, -8.179496006, -77.79363317),
    ("LT50080662009179CUB00", 2009, "Paron", 1.6947, -8.992750445, -77.66791335),
    ("LT50080672009131CUB00", 2009, "Qerocha", 1.4112, -9.717370767, -77.32451465),
    ("LT50080662011137CUB00", 2011, "Pelagatos", 1.7667, -8.179486595, -77.79499326),
    ("LT50080662011137CUB00", 2011, "Paron", 1.494, -8.993015575, -77.66873322),
    ("LT50080672011153CUB00", 2011, "Qerocha", 1.4067, -9.717370767, -77.32451465),
]


def registry():
    lines = [json.dumps({"schema": "aquacad-registry", "version": 1})]
    for i, (scene, year, name, area, lat, lon) in enumerate(RECORDS, start=1):
        lines.append(json.dumps({
            "id": i, "scene_id": scene, "year": year, "name": name, "cuenca": "Santa",
            "area_km2": area, "centroid_lat": lat, "centroid_lon": lon,
            "registered_at": "2012-11-0%dT12:00:00Z" % (1 + (i - 1) // 3), "border_ring": [],
        }, sort_keys=True))
    (HERE / "published_registry.jsonl").write_text("\n".join(lines) + "\n")


def box(lon0, lon1, lat0, lat1):
    return [[lon0, lat0], [lon1, lat0], [lon1, lat1], [lon0, lat1], [lon0, lat0]]


def boundaries():
    entries = [
        {"name": "Ancash", "level": "region", "parents": [], "rings": [box(-78.5, -77.0, -10.5, -7.5)]},
        {"name": "Huaylas", "level": "provincia", "parents": ["Ancash"], "rings": [box(-78.0, -77.5, -9.2, -8.8)]},
        {"name": "Caraz", "level": "distrito", "parents": ["Ancash", "Huaylas"],
         "rings": [box(-77.75, -77.6, -9.05, -8.95)]},
        {"name": "Pallasca", "level": "provincia", "parents": ["Ancash"], "rings": [box(-78.1, -77.6, -8.4, -7.9)]},
        # hole around the Pelagatos centroid, with an island inside the hole
        {"name": "Pampas", "level": "distrito", "parents": ["Ancash", "Pallasca"],
         "rings": [box(-77.9, -77.7, -8.3, -8.1), box(-77.80, -77.78, -8.19, -8.17),
                   box(-77.792, -77.788, -8.182, -8.178)]},
        {"name": "Recuay", "level": "provincia", "parents": ["Ancash"], "rings": [box(-77.6, -77.1, -10.0, -9.5)]},
        {"name": "Catac", "level": "distrito", "parents": ["Ancash", "Recuay"],
         "rings": [box(-77.5, -77.2, -9.9, -9.6)]},
    ]
    (HERE / "boundaries.json").write_text(json.dumps(entries, indent=1) + "\n")


OLD_MTL = """GROUP = L1_METADATA_FILE
  GROUP = METADATA_FILE_INFO
    ORIGIN = "Image courtesy of the U.S. Geological Survey"
    REQUEST_ID = "0101205100001_00001"
    PRODUCT_CREATION_TIME = 2012-05-10T10:12:32Z
    STATION_ID = "CUB"
    LANDSAT5_XBAND = "1"
    GROUND_STATION = "CUB"
    LPS_PROCESSOR_NUMBER = 0
    DATEHOUR_CONTACT_PERIOD = "0812213"
    SUBINTERVAL_NUMBER = "01"
  END_GROUP = METADATA_FILE_INFO
  GROUP = PRODUCT_METADATA
    PRODUCT_TYPE = "L1T"
    ELEVATION_SOURCE = "GLS2000"
    PROCESSING_SOFTWARE = "LPGS_11.3.0"
    EPHEMERIS_TYPE = "DEFINITIVE"
    SPACECRAFT_ID = "Landsat5"
    SENSOR_ID = "TM"
    SENSOR_MODE = "BUMPER"
    ACQUISITION_DATE = {date}
    SCENE_CENTER_SCAN_TIME = 15:02:19.7820310Z
    WRS_PATH = {path}
    STARTING_ROW = {row}
    ENDING_ROW = {row}
    BAND_COMBINATION = "1234567"
    PRODUCT_UL_CORNER_LAT = {ul_lat}
    PRODUCT_UL_CORNER_LON = {ul_lon}
    PRODUCT_UL_CORNER_MAPX = {ul_x}
    PRODUCT_UL_CORNER_MAPY = {ul_y}
    PRODUCT_SAMPLES_REF = {cols}
    PRODUCT_LINES_REF = {rows}
    PRODUCT_SAMPLES_THM = {cols}
    PRODUCT_LINES_THM = {rows}
    BAND1_FILE_NAME = "{id}_B1.TIF"
    BAND2_FILE_NAME = "{id}_B2.TIF"
    BAND3_FILE_NAME = "{id}_B3.TIF"
    BAND4_FILE_NAME = "{id}_B4.TIF"
    BAND5_FILE_NAME = "{id}_B5.TIF"
    BAND6_FILE_NAME = "{id}_B6.TIF"
    BAND7_FILE_NAME = "{id}_B7.TIF"
    METADATA_L1_FILE_NAME = "{id}_MTL.TXT"
  END_GROUP = PRODUCT_METADATA
  GROUP = MIN_MAX_RADIANCE
{radiance}  END_GROUP = MIN_MAX_RADIANCE
  GROUP = MIN_MAX_PIXEL_VALUE
{qcal}  END_GROUP = MIN_MAX_PIXEL_VALUE
  GROUP = PRODUCT_PARAMETERS
    CORRECTION_METHOD_GAIN_BAND1 = "CPF"
    SUN_AZIMUTH = {azimuth}
    SUN_ELEVATION = {elevation}
    CLOUD_COVER = {cloud}
  END_GROUP = PRODUCT_PARAMETERS
  GROUP = PROJECTION_PARAMETERS
    REFERENCE_DATUM = "WGS84"
    REFERENCE_ELLIPSOID = "WGS84"
    GRID_CELL_SIZE_THM = 30.000
    GRID_CELL_SIZE_REF = 30.000
    ORIENTATION = "NUP"
    RESAMPLING_OPTION = "CC"
    MAP_PROJECTION = "UTM"
  END_GROUP = PROJECTION_PARAMETERS
  GROUP = UTM_PARAMETERS
    ZONE_NUMBER = {zone}
  END_GROUP = UTM_PARAMETERS
END_GROUP = L1_METADATA_FILE
END
"""

RADIANCE = {1: (-1.52, 193.0), 2: (-2.84, 365.0), 3: (-1.17, 264.0), 4: (-1.51, 221.0), 5: (-0.37, 30.2), 7: (-0.15, 16.5)}


def old_radiance(bands):
    out = ""
    for b in [1, 2, 3, 4, 5, 6, 7]:
        if b == 6:
            out += "    LMAX_BAND6 = 15.303\n    LMIN_BAND6 = 1.238\n"
        elif b in bands:
            lmin, lmax = RADIANCE[b]
            out += "    LMAX_BAND%d = %.3f\n    LMIN_BAND%d = %.3f\n" % (b, lmax, b, lmin)
    return out


def old_qcal():
    return "".join("    QCALMAX_BAND%d = 255.0\n    QCALMIN_BAND%d = 1.0\n" % (b, b) for b in [1, 2, 3, 4, 5, 6, 7])


def old_mtl(scene_id, **kw):
    return OLD_MTL.format(id=scene_id, path=int(scene_id[3:6]), row=int(scene_id[6:9]), qcal=old_qcal(), **kw)


NEW_MTL = """GROUP = L1_METADATA_FILE
  GROUP = METADATA_FILE_INFO
    ORIGIN = "Image courtesy of the U.S. Geological Survey"
    REQUEST_ID = "0501212034567_00011"
    LANDSAT_SCENE_ID = "LT50080662009179CUB00"
    FILE_DATE = 2012-12-03T18:22:41Z
    STATION_ID = "CUB"
    PROCESSING_SOFTWARE_VERSION = "LPGS_12.1.0"
  END_GROUP = METADATA_FILE_INFO
  GROUP = PRODUCT_METADATA
    DATA_TYPE = "L1T"
    ELEVATION_SOURCE = "GLS2000"
    OUTPUT_FORMAT = "GEOTIFF"
    SPACECRAFT_ID = "LANDSAT_5"
    SENSOR_ID = "TM"
    WRS_PATH = 8
    WRS_ROW = 66
    DATE_ACQUIRED = 2009-06-28
    SCENE_CENTER_TIME = 15:04:31.9360690Z
    CORNER_UL_LAT_PRODUCT = -7.51624
    CORNER_UL_LON_PRODUCT = -78.90351
    CORNER_UL_PROJECTION_X_PRODUCT = 179400.000
    CORNER_UL_PROJECTION_Y_PRODUCT = 9168600.000
    REFLECTIVE_LINES = 7001
    REFLECTIVE_SAMPLES = 7861
    THERMAL_LINES = 7001
    THERMAL_SAMPLES = 7861
    FILE_NAME_BAND_1 = "LT50080662009179CUB00_B1.TIF"
    FILE_NAME_BAND_2 = "LT50080662009179CUB00_B2.TIF"
    METADATA_FILE_NAME = "LT50080662009179CUB00_MTL.txt"
  END_GROUP = PRODUCT_METADATA
  GROUP = IMAGE_ATTRIBUTES
    CLOUD_COVER = 12.00
    IMAGE_QUALITY = 9
    SUN_AZIMUTH = 43.35684451
    SUN_ELEVATION = 49.23451934
    EARTH_SUN_DISTANCE = 1.0166290
  END_GROUP = IMAGE_ATTRIBUTES
  GROUP = MIN_MAX_RADIANCE
    RADIANCE_MAXIMUM_BAND_1 = 193.000
    RADIANCE_MINIMUM_BAND_1 = -1.520
    RADIANCE_MAXIMUM_BAND_2 = 365.000
    RADIANCE_MINIMUM_BAND_2 = -2.840
    RADIANCE_MAXIMUM_BAND_3 = 264.000
    RADIANCE_MINIMUM_BAND_3 = -1.170
    RADIANCE_MAXIMUM_BAND_4 = 221.000
    RADIANCE_MINIMUM_BAND_4 = -1.510
    RADIANCE_MAXIMUM_BAND_5 = 30.200
    RADIANCE_MINIMUM_BAND_5 = -0.370
    RADIANCE_MAXIMUM_BAND_6 = 15.303
    RADIANCE_MINIMUM_BAND_6 = 1.238
    RADIANCE_MAXIMUM_BAND_7 = 16.500
    RADIANCE_MINIMUM_BAND_7 = -0.150
  END_GROUP = MIN_MAX_RADIANCE
  GROUP = MIN_MAX_PIXEL_VALUE
    QUANTIZE_CAL_MAX_BAND_1 = 255
    QUANTIZE_CAL_MIN_BAND_1 = 1
    QUANTIZE_CAL_MAX_BAND_2 = 255
    QUANTIZE_CAL_MIN_BAND_2 = 1
  END_GROUP = MIN_MAX_PIXEL_VALUE
  GROUP = PROJECTION_PARAMETERS
    MAP_PROJECTION = "UTM"
    DATUM = "WGS84"
    ELLIPSOID = "WGS84"
    UTM_ZONE = 18
    GRID_CELL_SIZE_REFLECTIVE = 30.00
    GRID_CELL_SIZE_THERMAL = 30.00
    ORIENTATION = "NORTH_UP"
    RESAMPLING_OPTION = "CUBIC_CONVOLUTION"
  END_GROUP = PROJECTION_PARAMETERS
END_GROUP = L1_METADATA_FILE
END
"""


def mtls():
    d = HERE / "mtl"
    d.mkdir(exist_ok=True)
    # pre-2012 vocabulary, southern scene with negative northing
    (d / "LT50070692008122CUB00_MTL.TXT").write_text(old_mtl(
        "LT50070692008122CUB00", date="2008-05-01", ul_lat=-12.0651, ul_lon=-76.3423, ul_x=244500.000,
        ul_y=-1334700.000, cols=7921, rows=7041, radiance=old_radiance(RADIANCE), azimuth=41.2291870,
        elevation=45.0000000, cloud=0.00, zone=-18))
    # 2012 vocabulary
    (d / "LT50080662009179CUB00_MTL.TXT").write_text(NEW_MTL)
    # radiance bounds absent: every band falls back to the sensor table
    (d / "LT50080672007142CUB00_MTL.TXT").write_text(old_mtl(
        "LT50080672007142CUB00", date="2007-05-22", ul_lat=-9.0412, ul_lon=-78.2276, ul_x=255000.000,
        ul_y=9000000.000, cols=7911, rows=7021, radiance="", azimuth=37.5, elevation=48.6021, cloud=3.00,
        zone=18))


def sample_package():
    d = HERE / "sample_package"
    d.mkdir(exist_ok=True)
    scene = "LT50070692008122CUB00"
    rows, cols = 12, 16
    text = old_mtl(scene, date="2008-05-01", ul_lat=-12.0651, ul_lon=-76.3423, ul_x=244500.000,
                   ul_y=-1334700.000, cols=cols, rows=rows, radiance=old_radiance(RADIANCE), azimuth=41.2291870,
                   elevation=45.0000000, cloud=0.00, zone=-18)
    (d / (scene + "_MTL.TXT")).write_text(text)
    for b in [1, 2, 3, 4, 5, 6, 7]:
        im = Image.new("L", (cols, rows))
        im.putdata([(b * 37 + r * 11 + c * 5) % 256 for r in range(rows) for c in range(cols)])
        im.save(d / ("%s_B%d.TIFF" % (scene, b)))


if __name__ == "__main__":
    registry()
    boundaries()
    mtls()
    sample_package()
