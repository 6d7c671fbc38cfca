//! The bundled schema descriptors against the exact public file layouts:
//! field orders, header names, label values and quirky cells as they appear
//! in the real distributions.

use std::io::Write;

use idsbench::data::{load_dataset_report, DatasetSchema};

fn write_tmp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

/// Build one headerless NSL-KDD line: 41 features + attack name + difficulty.
fn nslkdd_line(protocol: &str, service: &str, flag: &str, src_bytes: u32, label: &str) -> String {
    let mut fields: Vec<String> = vec!["0".into()]; // duration
    fields.push(protocol.into());
    fields.push(service.into());
    fields.push(flag.into());
    fields.push(src_bytes.to_string());
    // dst_bytes .. dst_host_srv_rerror_rate: 36 numeric features
    fields.extend((0..36).map(|i| format!("{}", (i % 3) as f64 * 0.5)));
    fields.push(label.into());
    fields.push("20".into()); // difficulty
    assert_eq!(fields.len(), 43);
    fields.join(",")
}

#[test]
fn nslkdd_layout_parses() {
    let lines = format!(
        "{}\n{}\n{}\n",
        nslkdd_line("tcp", "ftp_data", "SF", 491, "normal"),
        nslkdd_line("udp", "other", "SF", 146, "neptune"),
        nslkdd_line("tcp", "private", "S0", 0, "smurf"),
    );
    let schema = DatasetSchema::builtin("nslkdd").unwrap();
    let f = write_tmp(&lines);
    let (ds, report) = load_dataset_report(f.path(), &schema).unwrap();
    assert_eq!(ds.n_rows(), 3);
    assert_eq!(report.rows_skipped, 0);
    assert_eq!(ds.labels(), &[0, 1, 1], "normal=0, any attack name=1");
    assert_eq!(ds.n_features(), 41);
    // Categorical cells interned in appearance order: tcp=0, udp=1.
    assert_eq!(ds.raw_category(1, ds.row(0)[1]), Some("tcp"));
    assert_eq!(ds.raw_category(1, ds.row(1)[1]), Some("udp"));
    // Numeric features parsed: src_bytes of row 0 is 491.
    assert_eq!(ds.row(0)[4], 491.0);
}

#[test]
fn unsw_partitioned_layout_parses() {
    // UNSW_NB15_training-set.csv: header row, id + 42 features +
    // attack_cat + binary label.
    let content = "\
id,dur,proto,service,state,spkts,dpkts,sbytes,dbytes,rate,sttl,dttl,sload,dload,sloss,dloss,sinpkt,dinpkt,sjit,djit,swin,stcpb,dtcpb,dwin,tcprtt,synack,ackdat,smean,dmean,trans_depth,response_body_len,ct_srv_src,ct_state_ttl,ct_dst_ltm,ct_src_dport_ltm,ct_dst_sport_ltm,ct_dst_src_ltm,is_ftp_login,ct_ftp_cmd,ct_flw_http_mthd,ct_src_ltm,ct_srv_dst,is_sm_ips_ports,attack_cat,label
1,0.121478,tcp,-,FIN,6,4,258,172,74.087486,252,254,14158.94238,8495.365234,0,0,24.2956,8.375,30.177547,11.830604,255,621772692,2202533631,255,0.111664,0.05439,0.057274,43,43,0,0,1,1,1,1,1,1,0,0,0,1,1,0,Normal,0
2,0.000011,udp,dns,INT,2,0,114,0,90909.0902,254,0,41818181.82,0,0,0,0.011,0,0,0,0,0,0,0,0,0,0,57,0,0,0,2,2,1,1,1,2,0,0,0,1,2,0,Generic,1
";
    let schema = DatasetSchema::builtin("unswnb15-part").unwrap();
    let f = write_tmp(content);
    let (ds, report) = load_dataset_report(f.path(), &schema).unwrap();
    assert_eq!(ds.n_rows(), 2);
    assert_eq!(report.rows_skipped, 0);
    assert_eq!(ds.labels(), &[0, 1]);
    assert_eq!(ds.n_features(), 42);
    // `service` value "-" is a category of its own, not a missing numeric.
    assert_eq!(ds.raw_category(2, ds.row(0)[2]), Some("-"));
}

#[test]
fn unsw_fullset_layout_parses() {
    // UNSW-NB15_1.csv: headerless, 47 flow features + attack_cat + label;
    // attack_cat is empty on normal rows.
    let content = "\
59.166.0.0,1390,149.171.126.6,53,udp,CON,0.001055,132,164,31,29,0,0,dns,500473.9375,621800.9375,2,2,0,0,0,0,66,82,0,0,30.177547,11.830604,1421927414,1421927414,0.017,0.013,0,0,0,0,1,0,0,0,3,7,1,3,1,1,1,,0
175.45.176.0,13284,149.171.126.16,80,tcp,FIN,0.525538,1064,13186,31,29,2,6,http,15979.465,198910.2812,14,18,255,255,2751089390,3222438954,76,732,1,2558,1121.807129,295.26239,1421927414,1421927415,37.51,30.88,0.08,0.04,0.04,0,7,1,1,1,2,4,2,2,1,1,2,Exploits,1
";
    let schema = DatasetSchema::builtin("unswnb15").unwrap();
    let f = write_tmp(content);
    let (ds, report) = load_dataset_report(f.path(), &schema).unwrap();
    assert_eq!(ds.n_rows(), 2);
    assert_eq!(report.rows_skipped, 0);
    assert_eq!(ds.labels(), &[0, 1]);
    assert_eq!(ds.n_features(), 47);
}

#[test]
fn cidds_layout_parses_with_exclusions() {
    // CIDDS-001 flow CSV: header with spaces in names, padded Proto cells,
    // byte counts like "2 M", and suspicious/unknown/portScan traffic that
    // the class rules exclude.
    let content = "\
Date first seen,Duration,Proto,Src IP Addr,Src Pt,Dst IP Addr,Dst Pt,Packets,Bytes,Flows,Flags,Tos,class,attackType,attackID,attackDescription
2017-03-15 00:01:16.632,0.000,TCP  ,192.168.100.5,445,192.168.220.16,58844.0,1,108,1,.AP...,0,normal,---,---,---
2017-03-17 04:25:00.123,2.538,TCP  ,192.168.220.15,48888,192.168.100.5,80,11,2 M,1,.AP.SF,0,attacker,dos,1234,dos attack
2017-03-17 04:25:01.500,0.012,TCP  ,192.168.100.5,80,192.168.220.15,48888,9,5344,1,.AP.SF,0,victim,dos,1234,dos attack
2017-03-16 12:00:00.001,0.100,TCP  ,10.0.0.1,4444,192.168.100.5,22,3,180,1,.AP...,0,suspicious,---,---,---
2017-03-16 13:00:00.001,0.200,UDP  ,10.0.0.9,53,192.168.100.5,4000,2,1.5 K,1,.A....,0,unknown,---,---,---
2017-03-18 09:00:00.000,10.000,TCP  ,192.168.220.16,51213,192.168.100.5,22,40,4096,1,.AP.SF,0,attacker,portScan,99,scan
";
    let schema = DatasetSchema::builtin("cidds001").unwrap();
    let f = write_tmp(content);
    let (ds, report) = load_dataset_report(f.path(), &schema).unwrap();
    // normal + two dos flows kept; suspicious, unknown and portScan dropped.
    assert_eq!(ds.n_rows(), 3);
    assert_eq!(report.rows_excluded, 3);
    assert_eq!(ds.labels(), &[0, 1, 1]);
    assert_eq!(ds.n_features(), 12);
    // "2 M" expands to 2e6 bytes (feature index 8 = Bytes).
    assert_eq!(ds.row(1)[8], 2e6);
    // Padded "TCP  " cells trim to one category.
    assert_eq!(ds.raw_category(2, ds.row(0)[2]), Some("TCP"));
}

#[test]
fn cidds_preprocesses_end_to_end() {
    // The kept CIDDS rows must survive encode/normalize and train a model.
    let content = "\
Date first seen,Duration,Proto,Src IP Addr,Src Pt,Dst IP Addr,Dst Pt,Packets,Bytes,Flows,Flags,Tos,class,attackType,attackID,attackDescription
2017-03-15 00:01:16.632,1.000,TCP  ,192.168.100.5,445,192.168.220.16,58844,1,108,1,.AP...,0,normal,---,---,---
2017-03-15 00:02:20.412,2.000,UDP  ,192.168.100.6,53,192.168.220.16,40001,2,256,1,.A....,0,normal,---,---,---
2017-03-15 00:03:00.100,1.500,TCP  ,192.168.100.7,445,192.168.220.12,58999,1,120,1,.AP...,0,normal,---,---,---
2017-03-15 00:04:10.999,0.900,TCP  ,192.168.100.8,8080,192.168.220.13,52000,3,600,1,.AP.SF,0,normal,---,---,---
2017-03-17 04:25:00.123,0.010,TCP  ,192.168.220.15,48888,192.168.100.5,80,1100,66 K,1,....S.,0,attacker,dos,1,d
2017-03-17 04:25:00.223,0.020,TCP  ,192.168.220.15,48889,192.168.100.5,80,1500,90 K,1,....S.,0,attacker,dos,1,d
2017-03-17 04:25:00.323,0.015,TCP  ,192.168.220.16,48890,192.168.100.5,80,1200,72 K,1,....S.,0,victim,dos,1,d
2017-03-17 04:25:00.423,0.013,TCP  ,192.168.220.16,48891,192.168.100.5,80,900,54 K,1,....S.,0,victim,dos,1,d
";
    let schema = DatasetSchema::builtin("cidds001").unwrap();
    let f = write_tmp(content);
    let ds = idsbench::data::load_dataset(f.path(), &schema).unwrap();
    let enc = idsbench::data::encode_and_normalize(&ds).unwrap();
    let model =
        idsbench::classifier::ClassifierSpec::Cart(idsbench::tree::TreeParams::cart_published())
            .fit(&enc, 1)
            .unwrap();
    use idsbench::classifier::Classifier;
    let correct = enc
        .rows()
        .iter()
        .zip(enc.labels())
        .filter(|(row, &y)| model.predict(row).unwrap().0 == y)
        .count();
    assert_eq!(correct, enc.n_rows(), "separable toy must fit exactly");
}
