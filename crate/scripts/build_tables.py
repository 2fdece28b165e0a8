#!/usr/bin/env python3
"""Regenerate the bundled romanization and conversion tables.

Readings come from public references: pypinyin (Hanyu Pinyin), ToJyutping
(Cantonese Jyutping) and opencc-python-reimplemented (script conversion).
Tongyong Pinyin and Wade-Giles are derived from Hanyu Pinyin syllable by
syllable; Cantonese is respelled from Jyutping into Hong Kong style.

    pip install pypinyin ToJyutping opencc-python-reimplemented
    python3 scripts/build_tables.py crates/core/data
"""

import re
import sys
from pathlib import Path

import ToJyutping
from opencc import OpenCC
from pypinyin import Style, pinyin

VERSION = "2"

SINGLE_FAMILY = (
    "王李张刘陈杨黄赵吴周徐孙马朱胡郭何高林罗郑梁谢宋唐许韩冯邓曹彭曾肖田董袁潘"
    "于蒋蔡余杜叶程苏魏吕丁任沈姚卢姜崔钟谭陆汪范金石廖贾夏韦付方白邹孟熊秦邱江"
    "尹薛闫段侯龙史陶黎贺顾毛郝龚邵万钱严覃武戴莫孔向汤常温康施文牛樊葛邢安齐易"
    "乔伍庞颜倪庄聂章鲁岳翟殷詹申欧耿关兰焦俞左柳甘祝包宁尚符舒阮柯纪梅童凌毕单"
    "季裴霍涂成苗谷盛曲翁冉骆蓝路游辛靳管柴蒙鲍华喻祁蒲房滕屈饶解牟艾尤阳时穆农"
    "司卓古吉缪简车项连芦麦褚娄窦戚岑景党宫费卜冷晏席卫米柏宗瞿桂全佟应臧闵苟邬"
    "边卞姬师和仇栾隋商刁沙荣巫寇桑郎甄丛仲虞敖巩明佘池查麻苑迟邝区朴种乐盖萧傅阎"
)
COMPOUND_FAMILY = ["欧阳", "司马", "上官", "诸葛", "东方", "慕容", "令狐", "皇甫", "公孙", "夏侯", "长孙", "西门", "南宫", "司徒", "尉迟"]
# Common given-name letters. 雷 is deliberately a given-name letter only.
GIVEN = (
    "伟芳娜敏静丽强磊军洋勇艳杰娟涛明超秀霞平刚桂英华玉兰萍红鹏飞宇浩然子轩梓涵"
    "欣怡一诺依晨雨思彤佳琪嘉欢乐天晓东辉建国志新海波斌峰亮俊凯鑫旭阳鹏程博文"
    "雪梅丹玲婷颖慧琳倩莉雅蕾菲晶燕蓉萱妍瑶璐瑾瑞祥福禄寿喜春夏秋冬松竹菊荷莲"
    "清源泉浩淼泽润涵溪江河湖海山川林森岩石峰岭云霞霖雷电风雪霜露虹彩星月日辰"
    "光明亮晖晗昊昕晟晴智慧聪颖睿哲思远航帆舟鸿鹤凤凰龙虎豹鹰燕莺鹃蝶锦绣丝绮"
    "美丽善良德仁义礼信忠孝勤俭朴诚恒毅坚刚柔和平安康宁泰祥瑞吉庆福贵富荣华昌"
    "盛兴旺隆发达通顺利家国邦民生成功立业宏伟彬斌蔚韵琴棋书画诗词歌赋笑语声音"
    "心意情爱恩惠泽润沐浴洁净纯真玉珠珍宝琼瑛瑜璇璋琦琛瑾珊珏晓小少大中正方圆"
    "长永久远近新旧青红紫蓝绿金银铜铁钢铭锋镇铎鑫淑贤惠娴婉婷娇妮姗娅嫣媛嫦娥"
    "楠桐梓柏杨柳松桦枫槐桂梧栋梁材杉樱桃李杏梨枣橙檀凡帆繁茂芝兰蕙芸芷苓茜莎"
    "萌蓓蕊薇藤蔓若茹荣苗英芬芝华蒙卉敏捷俊秀伶俐聪慧睿哲嘉懿馨薰馥郁芳菲泓澜"
    "涛浪波汐潮沛淳渊深浅洪涌流洲渡津港湾滨沙漠原野田园村庄城市乡镇都邑京沪粤"
    "湘鄂川渝闽浙苏皖赣鲁豫冀晋陕甘宁青藏新疆蒙辽吉黑琼台港澳春晖朝阳旭东海宁"
    "振宇鹏举志强建华国强卫东红军爱国兴邦家豪子豪俊杰宏伟丽娟秀英桂兰玉梅淑珍"
    "一二三四五六七八九十百千万亿元圆园远苑源媛缘愿怡宜仪谊艺益逸奕亦翼毅忆义"
    "行重长乐传奇会宁都和解单曾查区朴仇盖缪种覃华任"
)
POLY_FAMILY = {
    # letter: (hanyu, jyutping)
    "单": ("shan", "sin4"),
    "曾": ("zeng", "zang1"),
    "解": ("xie", "haai6"),
    "仇": ("qiu", "kau4"),
    "区": ("ou", "au1"),
    "查": ("zha", "zaa1"),
    "朴": ("piao", "paak3"),
    "种": ("chong", "cung4"),
    "缪": ("miao", "miu6"),
    "覃": ("qin", "cam4"),
    "翟": ("zhai", "zaak6"),
    "乐": ("yue", "ngok6"),
    "柏": ("bai", "paak3"),
    "盖": ("ge", "gap3"),
    "易": ("yi", "jik6"),
}
POLY_WORDS = [
    "银行", "行走", "行云", "一行", "音乐", "快乐", "乐乐", "欢乐", "乐天", "长江", "长春", "长生",
    "长青", "长大", "长安", "重阳", "重庆", "重生", "朝阳", "朝晖", "朝霞", "和平", "和睦", "传奇",
    "自传", "都市", "成都", "首都", "解放", "了解", "单纯", "简单", "曾经", "调查", "地区", "朴实",
    "仇恨", "中华", "华山", "任务", "盖世", "种子", "播种", "柏林", "安宁", "宁静", "会计", "开会",
    "奇数", "西藏", "宝藏", "少年", "少华", "茜茜", "石头", "爱好", "好人", "降临", "大夫",
]

# Hanyu Pinyin syllable -> Tongyong Pinyin.
def tongyong_base(h):
    special = {
        "zhi": "jhih", "chi": "chih", "shi": "shih", "ri": "rih",
        "zi": "zih", "ci": "cih", "si": "sih",
        "weng": "wong", "wen": "wun", "feng": "fong", "meng": "mong",
        "peng": "pong", "beng": "bong",
    }
    if h in special:
        return special[h]
    s = h.replace("lv", "lyu").replace("nv", "nyu")
    if s.startswith("zh"):
        s = "jh" + s[2:]
    elif s.startswith("x"):
        s = "s" + s[1:]
        if s[1:2] == "u":
            s = "syu" + s[2:]
    elif s.startswith("q"):
        s = "c" + s[1:]
        if s[1:2] == "u":
            s = "cyu" + s[2:]
    if s.endswith("iong"):
        s = s[:-4] + "yong"
    elif s.endswith("iu"):
        s = s[:-2] + "iou"
    elif s.endswith("ui"):
        s = s[:-2] + "uei"
    return s


# Hanyu Pinyin syllable -> Wade-Giles (apostrophes and umlauts dropped).
WG_INITIALS = [
    ("zh", "ch"), ("ch", "ch"), ("sh", "sh"), ("b", "p"), ("p", "p"), ("m", "m"),
    ("f", "f"), ("d", "t"), ("t", "t"), ("n", "n"), ("l", "l"), ("g", "k"), ("k", "k"),
    ("h", "h"), ("j", "ch"), ("q", "ch"), ("x", "hs"), ("r", "j"), ("z", "ts"),
    ("c", "ts"), ("s", "s"), ("y", "y"), ("w", "w"),
]


def wadegiles(h):
    whole = {
        "zhi": "chih", "chi": "chih", "shi": "shih", "ri": "jih", "zi": "tzu", "ci": "tzu",
        "si": "ssu", "er": "erh", "e": "o", "ge": "ko", "ke": "ko", "he": "ho", "yi": "i",
        "you": "yu", "yu": "yu", "yue": "yueh", "yuan": "yuan", "yun": "yun", "ye": "yeh",
        "yan": "yen", "yong": "yung", "rong": "jung", "lve": "lueh", "nve": "nueh",
        "lv": "lu", "nv": "nu", "lvan": "luan", "weng": "weng",
    }
    if h in whole:
        return whole[h]
    ini, fin = "", h
    for src, dst in WG_INITIALS:
        if h.startswith(src):
            ini, fin = dst, h[len(src):]
            src_ini = src
            break
    else:
        src_ini = ""
    if src_ini in ("j", "q", "x"):
        fin = {"u": "u", "ue": "ueh", "uan": "uan", "un": "un"}.get(fin, fin)
    if fin == "ong":
        fin = "ung"
    elif fin == "iong":
        fin = "iung"
    elif fin == "ian":
        fin = "ien"
    elif fin == "ie":
        fin = "ieh"
    elif fin == "ui":
        fin = "uei" if src_ini in ("g", "k") else "ui"
    elif fin == "uo":
        fin = "uo" if src_ini in ("g", "k", "h", "sh") else "o"
    elif fin == "e" and src_ini in ("g", "k", "h"):
        fin = "o"
    elif fin == "e" and src_ini in ("zh", "ch", "sh", "r"):
        fin = "e"
    return ini + fin


# Jyutping syllable -> Hong Kong style Cantonese spelling.
JP_INITIALS = ["gw", "kw", "ng", "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h", "w", "z", "c", "s", "j"]
JP_INITIAL_MAP = {"b": "p", "d": "t", "g": "k", "gw": "kw", "z": "ch", "c": "ch", "j": "y"}
JP_FINAL_MAP = [
    ("aai", "ai"), ("aau", "au"), ("aam", "am"), ("aan", "an"), ("aang", "ang"),
    ("aap", "ap"), ("aat", "at"), ("aak", "ak"), ("aa", "a"),
    ("eoi", "ui"), ("eon", "un"), ("eot", "ut"),
    ("oeng", "eung"), ("oek", "euk"), ("oe", "eu"),
    ("yun", "uen"), ("yut", "uet"), ("yu", "ue"),
    ("ou", "o"), ("u", "oo"),
]


def cantonese(jp):
    s = re.sub(r"\d", "", jp)
    if s in ("m", "ng", "wu"):
        return s
    ini, fin = "", s
    for cand in JP_INITIALS:
        if s.startswith(cand) and len(s) > len(cand):
            ini, fin = cand, s[len(cand):]
            break
    if ini == "j" and fin.startswith("yu"):
        ini = ""
        fin = "y" + {"yu": "ue", "yun": "uen", "yut": "uet"}.get(fin, fin[2:])
        return fin
    for src, dst in JP_FINAL_MAP:
        if fin == src:
            fin = dst
            break
    return JP_INITIAL_MAP.get(ini, ini) + fin


def hanyu_of(text):
    return [p[0] for p in pinyin(text, style=Style.NORMAL, errors="ignore")]


def jyutping_of(text):
    out = ToJyutping.get_jyutping_list(text)
    return [jp.split(" ")[0] if jp else None for _, jp in out]


def main(out_dir):
    out = Path(out_dir)
    s2t = OpenCC("s2t")
    t2s = OpenCC("t2s")

    letters = []
    seen = set()
    for ch in SINGLE_FAMILY + "".join(COMPOUND_FAMILY) + GIVEN:
        if ch not in seen:
            seen.add(ch)
            letters.append(ch)

    rows = {}  # letter -> (hy, ct, ty, wd)
    for ch in letters:
        hy = hanyu_of(ch)[0]
        trad = s2t.convert(ch)
        jp = jyutping_of(trad)[0] or jyutping_of(ch)[0]
        if jp is None:
            continue
        rows[ch] = (hy, cantonese(jp), tongyong_base(hy), wadegiles(hy))
        if trad != ch and trad not in rows:
            rows[trad] = rows[ch]

    header = "# version {}\n# letter\tsyllable\n".format(VERSION)
    for idx, name in enumerate(["hanyu.tsv", "cantonese.tsv", "tongyong.tsv", "wadegiles.tsv"]):
        with open(out / name, "w", encoding="utf-8") as f:
            f.write(header)
            for ch, r in rows.items():
                f.write("{}\t{}\n".format(ch, r[idx]))

    with open(out / "polyphone_family.tsv", "w", encoding="utf-8") as f:
        f.write("# version {}\n# letter\thanyu\tcantonese\ttongyong\twadegiles\n".format(VERSION))
        for ch, (hy, jp) in POLY_FAMILY.items():
            rec = (hy, cantonese(jp), tongyong_base(hy), wadegiles(hy))
            for form in dict.fromkeys([ch, s2t.convert(ch)]):
                f.write("{}\t{}\n".format(form, "\t".join(rec)))

    with open(out / "polyphone_words.tsv", "w", encoding="utf-8") as f:
        f.write("# version {}\n# word\thanyu\tcantonese\ttongyong\twadegiles (syllables space-separated)\n".format(VERSION))
        for w in POLY_WORDS:
            hys = hanyu_of(w)
            jps = jyutping_of(s2t.convert(w))
            if len(hys) != len(w) or any(j is None for j in jps):
                continue
            per_system = [
                hys,
                [cantonese(j) for j in jps],
                [tongyong_base(h) for h in hys],
                [wadegiles(h) for h in hys],
            ]
            # keep words that change at least one letter's standalone reading
            if all(rows.get(ch, (None,) * 4)[k] == per_system[k][i]
                   for i, ch in enumerate(w) for k in range(4)):
                continue
            cols = [
                " ".join(hys),
                " ".join(cantonese(j) for j in jps),
                " ".join(tongyong_base(h) for h in hys),
                " ".join(wadegiles(h) for h in hys),
            ]
            for form in dict.fromkeys([w, s2t.convert(w)]):
                f.write("{}\t{}\n".format(form, "\t".join(cols)))

    with open(out / "family_names.txt", "w", encoding="utf-8") as f:
        f.write("# version {}\n".format(VERSION))
        for fam in list(SINGLE_FAMILY) + COMPOUND_FAMILY:
            for form in dict.fromkeys([fam, s2t.convert(fam)]):
                f.write(form + "\n")

    with open(out / "trad2simp.tsv", "w", encoding="utf-8") as f:
        f.write("# version {}\n# traditional\tsimplified\n".format(VERSION))
        done = set()
        for ch in rows:
            simp = t2s.convert(ch)
            if simp != ch and ch not in done:
                done.add(ch)
                f.write("{}\t{}\n".format(ch, simp))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/data")
